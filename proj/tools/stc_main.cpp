// stc: build suffix tree profiles, classify messages, and run
// cross-validated experiments.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stc/corpus.hpp"
#include "stc/errors.hpp"
#include "stc/evaluation.hpp"
#include "stc/experiment.hpp"
#include "stc/st_classifier.hpp"
#include "stc/suffix_tree.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;

std::string shortest(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

stc::ClassTree load_profile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw stc::ConfigError("cannot read profile: " + path.string());
  try {
    return stc::read_profile(in);
  } catch (const stc::ConfigError& e) {
    throw stc::ConfigError(path.string() + ": " + e.what());
  }
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw stc::ConfigError("cannot read input: " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

int cmd_build(const fs::path& input, int depth, const fs::path& out) {
  stc::TreeBuilder builder(depth);
  const auto messages = stc::load_class_dir(input, stc::Label::Spam);
  if (messages.empty()) throw stc::ConfigError("no input files in " + input.string());
  for (const auto& m : messages) builder.insert(m.chars());
  const auto tree = builder.build();

  std::ostringstream buf;
  stc::write_profile(tree, buf);
  stc::write_file_atomic(out, buf.str());

  const auto stats = stc::tree_stats(tree);
  std::cout << "documents\t" << tree.doc_count() << "\n"
            << "node_count\t" << stats.node_count << "\n"
            << "frequency_sum\t" << stats.frequency_sum << "\n"
            << "char_count\t" << tree.char_count() << "\n";
  return 0;
}

int cmd_classify(const fs::path& ham_path, const fs::path& spam_path, stc::ScoringConfig cfg,
                 bool depth_given, const std::vector<fs::path>& inputs) {
  const auto ham = load_profile(ham_path);
  const auto spam = load_profile(spam_path);
  if (!depth_given) cfg.depth = std::min(ham.depth_limit(), spam.depth_limit());
  stc::validate(cfg);
  for (const auto& path : inputs) {
    const auto email = stc::parse_email(read_all(path));
    const stc::Message msg(email, stc::Label::Ham, path.string());
    const auto v = stc::classify(ham, spam, msg.chars(), cfg);
    std::cout << path.string() << '\t' << stc::to_string(v.label) << '\t'
              << (v.no_evidence ? std::string("no-evidence") : shortest(v.hsr)) << '\t'
              << shortest(v.ham_score) << '\t' << shortest(v.spam_score) << '\n';
  }
  return 0;
}

void print_row(std::string_view title, const stc::SweepRow& row) {
  const auto& m = row.metrics;
  std::cout << title << " (th=" << shortest(row.threshold) << "): SR=" << percent(m.sr)
            << "% SP=" << percent(m.sp) << "% FPR=" << percent(m.fpr) << "% FNR=" << percent(m.fnr)
            << "% sum_errors=" << percent(m.sum_errors) << "%\n";
}

int cmd_eval(const fs::path& spec_path) {
  const auto spec = stc::load_experiment(spec_path);
  const auto result = stc::run_experiment(spec);
  stc::write_experiment_outputs(spec, result);

  std::cout << "eds " << result.eds.name << ": " << result.eds.count(stc::Label::Spam) << " spam, "
            << result.eds.count(stc::Label::Ham) << " ham, " << result.folds.k << " folds\n";
  if (const auto* row = result.report.row_at(1.0)) print_row("at 1.0", *row);
  const auto opt = stc::optimal_threshold(result.report);
  print_row(opt.thresholds.size() > 1 ? "optimal range start" : "optimal",
            *result.report.row_at(opt.lo()));
  if (opt.thresholds.size() > 1) {
    std::cout << "optimal thresholds " << shortest(opt.lo()) << " - " << shortest(opt.hi())
              << (opt.contiguous ? "" : " (non-contiguous)") << "\n";
  }
  std::cout << "reports written to " << spec.output_dir.string() << "\n";
  return 0;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else stc::write_file_atomic(out, text);
}

int cmd_compose(const fs::path& spec_path, const std::string& out) {
  const auto spec = stc::load_experiment(spec_path);
  const auto eds = stc::compose_experiment_eds(spec, stc::load_sources(spec));
  emit(stc::eds_manifest_json(eds), out);
  return 0;
}

int cmd_folds(const fs::path& spec_path, const std::string& out) {
  const auto spec = stc::load_experiment(spec_path);
  const auto eds = stc::compose_experiment_eds(spec, stc::load_sources(spec));
  const auto folds = stc::stratified_folds(eds, spec.folds, spec.seed);
  emit(stc::folds_json(eds, folds, spec.seed), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Suffix tree text classifier"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "Build a class profile from a directory of messages");
  std::string build_input, build_out;
  int build_depth = stc::kDefaultTreeDepth;
  build->add_option("input", build_input, "Directory of messages of one class")->required();
  build->add_option("-d,--depth", build_depth, "Tree depth limit")->capture_default_str();
  build->add_option("-o,--out", build_out, "Profile JSON to write")->required();

  auto* classify = app.add_subcommand("classify", "Classify messages against two profiles");
  std::string ham_profile, spam_profile, phi = "constant", norm = "none";
  double threshold = 1.0;
  int depth = 0;
  std::vector<std::string> inputs;
  classify->add_option("--ham", ham_profile, "Ham profile JSON")->required();
  classify->add_option("--spam", spam_profile, "Spam profile JSON")->required();
  classify->add_option("--phi", phi, "constant|linear|square|root|logit|sigmoid")->capture_default_str();
  classify->add_option("--norm", norm, "none|permutation|length")->capture_default_str();
  classify->add_option("-t,--threshold", threshold, "Ham iff ham/spam score ratio >= threshold")
      ->capture_default_str();
  auto* depth_opt = classify->add_option("-d,--depth", depth, "Match length cap (default: profile depth)");
  classify->add_option("files", inputs, "Message files")->required();

  auto* eval = app.add_subcommand("eval", "Run a cross-validated experiment spec");
  std::string eval_spec;
  eval->add_option("spec", eval_spec, "Experiment spec JSON")->required();

  auto* compose = app.add_subcommand("compose-eds", "Write the EDS manifest an experiment spec selects");
  std::string compose_spec, compose_out;
  compose->add_option("spec", compose_spec, "Experiment spec JSON")->required();
  compose->add_option("-o,--out", compose_out, "Output file (default: stdout)");

  auto* folds = app.add_subcommand("folds", "Write the fold assignment an experiment spec produces");
  std::string folds_spec, folds_out;
  folds->add_option("spec", folds_spec, "Experiment spec JSON")->required();
  folds->add_option("-o,--out", folds_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*build) return cmd_build(build_input, build_depth, build_out);
    if (*classify) {
      stc::ScoringConfig cfg;
      const auto p = stc::parse_significance(phi);
      if (!p) throw stc::ConfigError("--phi: unknown significance function '" + phi + "'");
      const auto n = stc::parse_match_norm(norm);
      if (!n) throw stc::ConfigError("--norm: unknown match normalisation '" + norm + "'");
      cfg.phi = *p;
      cfg.norm = *n;
      cfg.threshold = threshold;
      cfg.depth = depth;
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      return cmd_classify(ham_profile, spam_profile, cfg, depth_opt->count() > 0, paths);
    }
    if (*eval) return cmd_eval(eval_spec);
    if (*compose) return cmd_compose(compose_spec, compose_out);
    if (*folds) return cmd_folds(folds_spec, folds_out);
  } catch (const stc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const stc::InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUsage;
}
