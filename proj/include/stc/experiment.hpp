#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stc/corpus.hpp"
#include "stc/evaluation.hpp"

namespace stc {

/// Where one named message source comes from.
struct SourceSpec {
  enum class Kind { LingSpam, Directory };
  Kind kind = Kind::Directory;
  std::filesystem::path path;
  /// Label for every file of a Directory source.
  Label label = Label::Spam;
};

/// A reproducible experiment, read from a JSON file. Relative paths are
/// resolved against the file's directory. Unknown keys are rejected.
///
///   {
///     "name": "ls11-constant",
///     "sources": {"LS": {"lingspam": "corpora/lingspam_public"}},
///     "eds": {"preset": "LS-11"},
///     "classifier": "st",
///     "st": {"phi": "constant", "norm": "none", "depth": 8},
///     "folds": 10, "seed": 1,
///     "thresholds": {"lo": 0.7, "hi": 1.3, "step": 0.02},
///     "output": {"dir": "out/ls11-constant"}
///   }
///
/// "eds" is either {"preset": name}, a custom {"name", "spam": {"source",
/// "count"}, "ham": [{"source", "count"}, ...]}, or {"spam_dir", "ham_dir"}
/// to use every file of two directories. "nb" takes {"stopwords": path,
/// "min_length": n, "stem": bool}.
struct ExperimentSpec {
  std::string name;
  std::map<std::string, SourceSpec, std::less<>> sources;
  EdsSpec eds;
  /// Set when eds uses every message of its sources ({"spam_dir","ham_dir"}).
  bool eds_uses_all = false;
  ClassifierSpec classifier;
  int folds = 10;
  std::uint64_t seed = 0;
  std::vector<double> thresholds;
  std::filesystem::path output_dir;
  /// Canonical JSON echo of the file as read.
  std::string echo;
};

/// Throws ConfigError naming the offending key or value.
ExperimentSpec parse_experiment(std::string_view json_text, const std::filesystem::path& base_dir);
ExperimentSpec load_experiment(const std::filesystem::path& file);

MessagePool load_sources(const ExperimentSpec& spec);
EmailDataSet compose_experiment_eds(const ExperimentSpec& spec, const MessagePool& pool);

struct ExperimentResult {
  EmailDataSet eds;
  FoldAssignment folds;
  SweepReport report;
};

/// Loads, composes, folds, cross-validates, and checks the report's
/// invariants (InvariantViolation on failure).
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Writes sweep.csv, roc.csv, summary.json, eds.json and manifest.json into
/// spec.output_dir, each via write-then-rename.
void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result);

/// Spec echo, seed, EDS entries and a SHA-256 of every message's text.
std::string run_manifest_json(const ExperimentSpec& spec, const ExperimentResult& result);

void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string sha256_hex(std::string_view data);

}  // namespace stc
