#include "stc/experiment.hpp"

#include <fstream>
#include <iterator>
#include <set>

#include <json.hpp>
#include <openssl/evp.h>

#include "stc/errors.hpp"

namespace stc {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void reject_unknown(const ordered_json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_as(const ordered_json& obj, std::string_view key, std::string_view where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(std::string(where) + ": missing key '" + std::string(key) + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(where) + "." + std::string(key) + ": wrong type");
  }
}

template <typename T>
T get_or(const ordered_json& obj, std::string_view key, T fallback, std::string_view where) {
  if (!obj.contains(key)) return fallback;
  return get_as<T>(obj, key, where);
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

SourceCount parse_source_count(const ordered_json& j, std::string_view where) {
  reject_unknown(j, where, {"source", "count"});
  const auto count = get_as<std::int64_t>(j, "count", where);
  if (count < 0) throw ConfigError(std::string(where) + ".count must be non-negative");
  return {get_as<std::string>(j, "source", where), static_cast<std::size_t>(count)};
}

ScoringConfig parse_st(const ordered_json& j) {
  reject_unknown(j, "st", {"phi", "norm", "depth"});
  ScoringConfig cfg;
  const auto phi = get_or<std::string>(j, "phi", "constant", "st");
  const auto norm = get_or<std::string>(j, "norm", "none", "st");
  const auto parsed_phi = parse_significance(phi);
  if (!parsed_phi) throw ConfigError("st.phi: unknown significance function '" + phi + "'");
  const auto parsed_norm = parse_match_norm(norm);
  if (!parsed_norm) throw ConfigError("st.norm: unknown match normalisation '" + norm + "'");
  cfg.phi = *parsed_phi;
  cfg.norm = *parsed_norm;
  cfg.depth = get_or<int>(j, "depth", kDefaultTreeDepth, "st");
  validate(cfg);
  return cfg;
}

TokenPipeline parse_nb(const ordered_json& j, const fs::path& base) {
  reject_unknown(j, "nb", {"stopwords", "min_length", "stem"});
  TokenPipeline p = TokenPipeline::standard();
  if (j.contains("stopwords")) p.stopwords = load_stopwords(resolve(base, get_as<std::string>(j, "stopwords", "nb")));
  const auto min_len = get_or<std::int64_t>(j, "min_length", 3, "nb");
  if (min_len < 0) throw ConfigError("nb.min_length must be non-negative");
  p.min_token_length = static_cast<std::size_t>(min_len);
  p.stem = get_or<bool>(j, "stem", true, "nb");
  return p;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

ExperimentSpec parse_experiment(std::string_view json_text, const fs::path& base_dir) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("experiment spec is not valid JSON: ") + e.what());
  }
  reject_unknown(root, "spec", {"name", "sources", "eds", "classifier", "st", "nb", "folds", "seed",
                                "thresholds", "output"});

  ExperimentSpec spec;
  spec.echo = root.dump();
  spec.name = get_or<std::string>(root, "name", "experiment", "spec");
  const auto seed = get_or<std::int64_t>(root, "seed", 0, "spec");
  if (seed < 0) throw ConfigError("spec.seed must be non-negative");
  spec.seed = static_cast<std::uint64_t>(seed);
  spec.folds = get_or<int>(root, "folds", 10, "spec");
  if (spec.folds < 2) throw ConfigError("spec.folds must be at least 2");

  if (root.contains("sources")) {
    const auto& sources = root["sources"];
    if (!sources.is_object()) throw ConfigError("spec.sources: expected an object");
    for (const auto& [name, src] : sources.items()) {
      const std::string where = "sources." + name;
      reject_unknown(src, where, {"lingspam", "dir", "label"});
      SourceSpec s;
      if (src.contains("lingspam")) {
        if (src.contains("dir") || src.contains("label")) {
          throw ConfigError(where + ": 'lingspam' cannot be combined with 'dir' or 'label'");
        }
        s.kind = SourceSpec::Kind::LingSpam;
        s.path = resolve(base_dir, get_as<std::string>(src, "lingspam", where));
      } else {
        s.kind = SourceSpec::Kind::Directory;
        s.path = resolve(base_dir, get_as<std::string>(src, "dir", where));
        const auto label = parse_label(get_as<std::string>(src, "label", where));
        if (!label) throw ConfigError(where + ".label must be \"spam\" or \"ham\"");
        s.label = *label;
      }
      spec.sources.emplace(name, std::move(s));
    }
  }

  if (!root.contains("eds")) throw ConfigError("spec: missing key 'eds'");
  const auto& eds = root["eds"];
  if (eds.contains("preset")) {
    reject_unknown(eds, "eds", {"preset"});
    const auto name = get_as<std::string>(eds, "preset", "eds");
    auto preset = named_eds(name, spec.seed);
    if (!preset) throw ConfigError("eds.preset: unknown data set '" + name + "'");
    spec.eds = *preset;
  } else if (eds.contains("spam_dir") || eds.contains("ham_dir")) {
    reject_unknown(eds, "eds", {"name", "spam_dir", "ham_dir"});
    spec.sources["spam_dir"] = {SourceSpec::Kind::Directory,
                                resolve(base_dir, get_as<std::string>(eds, "spam_dir", "eds")), Label::Spam};
    spec.sources["ham_dir"] = {SourceSpec::Kind::Directory,
                               resolve(base_dir, get_as<std::string>(eds, "ham_dir", "eds")), Label::Ham};
    spec.eds = EdsSpec{get_or<std::string>(eds, "name", spec.name, "eds"), {"spam_dir", 0}, {{"ham_dir", 0}}, spec.seed};
    spec.eds_uses_all = true;
  } else {
    reject_unknown(eds, "eds", {"name", "spam", "ham"});
    spec.eds.name = get_or<std::string>(eds, "name", spec.name, "eds");
    spec.eds.seed = spec.seed;
    if (!eds.contains("spam")) throw ConfigError("eds: missing key 'spam'");
    spec.eds.spam = parse_source_count(eds["spam"], "eds.spam");
    const auto& ham = eds.contains("ham") ? eds["ham"] : ordered_json::array();
    if (!ham.is_array()) throw ConfigError("eds.ham: expected an array");
    for (std::size_t i = 0; i < ham.size(); ++i) {
      spec.eds.ham.push_back(parse_source_count(ham[i], "eds.ham[" + std::to_string(i) + "]"));
    }
  }

  const auto kind = get_as<std::string>(root, "classifier", "spec");
  if (kind == "st") {
    if (root.contains("nb")) throw ConfigError("spec: 'nb' options given for an st classifier");
    spec.classifier = parse_st(root.contains("st") ? root["st"] : ordered_json::object());
  } else if (kind == "nb") {
    if (root.contains("st")) throw ConfigError("spec: 'st' options given for an nb classifier");
    spec.classifier = parse_nb(root.contains("nb") ? root["nb"] : ordered_json::object(), base_dir);
  } else {
    throw ConfigError("spec.classifier must be \"st\" or \"nb\", got '" + kind + "'");
  }

  if (root.contains("thresholds")) {
    const auto& t = root["thresholds"];
    reject_unknown(t, "thresholds", {"lo", "hi", "step"});
    spec.thresholds = threshold_grid(get_or<double>(t, "lo", 0.70, "thresholds"),
                                     get_or<double>(t, "hi", 1.30, "thresholds"),
                                     get_or<double>(t, "step", 0.02, "thresholds"));
  } else {
    spec.thresholds = default_threshold_grid();
  }

  if (root.contains("output")) {
    const auto& out = root["output"];
    reject_unknown(out, "output", {"dir"});
    spec.output_dir = resolve(base_dir, get_as<std::string>(out, "dir", "output"));
  } else {
    spec.output_dir = base_dir / (spec.name + "-out");
  }
  return spec;
}

ExperimentSpec load_experiment(const fs::path& file) {
  return parse_experiment(read_text(file), file.parent_path().empty() ? fs::path(".") : file.parent_path());
}

MessagePool load_sources(const ExperimentSpec& spec) {
  MessagePool pool;
  for (const auto& [name, src] : spec.sources) {
    pool[name] = src.kind == SourceSpec::Kind::LingSpam
                     ? load_lingspam_dir(src.path)
                     : load_class_dir(src.path, src.label, name + "/");
  }
  return pool;
}

EmailDataSet compose_experiment_eds(const ExperimentSpec& spec, const MessagePool& pool) {
  EdsSpec eds = spec.eds;
  if (spec.eds_uses_all) {
    auto available = [&](const std::string& source, Label label) {
      const auto it = pool.find(source);
      if (it == pool.end()) return std::size_t{0};
      return static_cast<std::size_t>(std::count_if(it->second.begin(), it->second.end(),
                                                    [label](const Message& m) { return m.label() == label; }));
    };
    eds.spam.count = available(eds.spam.source, Label::Spam);
    for (auto& h : eds.ham) h.count = available(h.source, Label::Ham);
  }
  return compose_eds(pool, eds);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const auto pool = load_sources(spec);
  ExperimentResult result;
  result.eds = compose_experiment_eds(spec, pool);
  result.folds = stratified_folds(result.eds, spec.folds, spec.seed);
  result.report = run_cv(result.eds, result.folds, spec.classifier, spec.thresholds, spec.seed);
  check_invariants(result.report, result.eds.count(Label::Spam), result.eds.count(Label::Ham));
  return result;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string run_manifest_json(const ExperimentSpec& spec, const ExperimentResult& result) {
  ordered_json doc;
  doc["spec"] = ordered_json::parse(spec.echo);
  doc["seed"] = spec.seed;
  doc["eds"] = result.eds.name;
  doc["folds"] = result.folds.k;
  auto& inputs = doc["inputs"] = ordered_json::array();
  for (std::size_t i = 0; i < result.eds.size(); ++i) {
    const auto& m = result.eds.messages[i];
    inputs.push_back({{"source_id", m.source_id()},
                      {"label", to_string(m.label())},
                      {"fold", result.folds.fold_of[i]},
                      {"text_sha256", sha256_hex(m.text())}});
  }
  return doc.dump(2) + "\n";
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file: " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ConfigError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result) {
  const auto& dir = spec.output_dir;
  write_file_atomic(dir / "sweep.csv", sweep_csv(result.report));
  write_file_atomic(dir / "roc.csv", roc_csv(result.report));
  write_file_atomic(dir / "summary.json", summary_json(result.report));
  write_file_atomic(dir / "eds.json", eds_manifest_json(result.eds));
  write_file_atomic(dir / "manifest.json", run_manifest_json(spec, result));
}

}  // namespace stc
