#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stc/corpus.hpp"
#include "stc/naive_bayes.hpp"
#include "stc/st_classifier.hpp"

namespace stc {

/// Counts keyed true class -> assigned class.
struct Confusion {
  std::uint64_t ss = 0;
  std::uint64_t sh = 0;
  std::uint64_t hs = 0;
  std::uint64_t hh = 0;

  std::uint64_t spam_total() const { return ss + sh; }
  std::uint64_t ham_total() const { return hs + hh; }
  std::uint64_t total() const { return ss + sh + hs + hh; }
  void add(Label truth, Label assigned);
  Confusion& operator+=(const Confusion& o);
  bool operator==(const Confusion&) const = default;
};

struct MetricSet {
  double sr = 0, sp = 0, hr = 0, hp = 0;
  double tpr = 0, fpr = 0, fnr = 0;
  double sum_errors = 0;
  /// Nothing was assigned to that class, so its precision is reported as 0.
  bool sp_undefined = false;
  bool hp_undefined = false;
};

/// Throws ConfigError if no spam or no ham was tested.
MetricSet metrics(const Confusion& c);

/// lo, lo + step, ..., hi, each rounded to 1e-9 to keep grid points exact.
std::vector<double> threshold_grid(double lo, double hi, double step);
/// 0.70 to 1.30 in steps of 0.02.
std::vector<double> default_threshold_grid();

struct SweepRow {
  double threshold = 0;
  Confusion confusion;
  MetricSet metrics;
  std::uint64_t no_evidence = 0;
};

struct SweepReport {
  std::string eds_name;
  std::uint64_t seed = 0;
  int folds = 0;
  /// Classifier settings echoed into every report, in a fixed order.
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<SweepRow> rows;

  const SweepRow* row_at(double threshold) const;
};

/// One held-out document's score, computed once and reused at every threshold.
struct ScoredDocument {
  Label truth = Label::Ham;
  double hsr = 1.0;
  bool no_evidence = false;
};

/// Micro-averaged sweep: decisions re-derived from stored hsr values.
std::vector<SweepRow> sweep_rows(std::span<const ScoredDocument> docs,
                                 std::span<const double> thresholds);

using ClassifierSpec = std::variant<ScoringConfig, TokenPipeline>;

std::vector<std::pair<std::string, std::string>> describe(const ClassifierSpec& spec);

/// k-fold cross-validation. Each held-out document is scored once per fold;
/// confusions are summed over folds. Throws ConfigError for an empty or
/// unsorted threshold list or a fold assignment that does not fit the EDS.
SweepReport run_cv(const EmailDataSet& eds, const FoldAssignment& folds,
                   const ClassifierSpec& classifier, std::span<const double> thresholds,
                   std::uint64_t seed = 0);

/// Several suffix-tree configurations over the same folds. Trees are built
/// once per fold at the largest requested depth and shared: a shallower
/// query of a deeper tree is exact.
std::vector<SweepReport> run_cv_st(const EmailDataSet& eds, const FoldAssignment& folds,
                                   std::span<const ScoringConfig> configs,
                                   std::span<const double> thresholds, std::uint64_t seed = 0);

/// Throws InvariantViolation naming the first broken property: strictly
/// increasing thresholds, per-row class totals (when given), FPR
/// non-decreasing and FNR non-increasing in the threshold.
void check_invariants(const SweepReport& report, std::optional<std::uint64_t> spam_total = {},
                      std::optional<std::uint64_t> ham_total = {});

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
  bool operator==(const RocPoint&) const = default;
};

/// One point per threshold, deduplicated, sorted by FPR then TPR.
std::vector<RocPoint> roc_points(const SweepReport& report);

struct OptimalThreshold {
  /// Every threshold attaining the minimum sum of errors.
  std::vector<double> thresholds;
  /// False when the minimisers are not adjacent grid points.
  bool contiguous = true;
  MetricSet metrics;

  double lo() const { return thresholds.front(); }
  double hi() const { return thresholds.back(); }
};

/// Throws ConfigError on an empty report.
OptimalThreshold optimal_threshold(const SweepReport& report);

struct Breakeven {
  std::optional<double> value;
  bool interpolated = false;
  std::string diagnostic;
};

/// Highest recall at which recall equals precision for `cls`. Without an
/// exact tie on the grid, the crossing between adjacent thresholds is
/// interpolated linearly and flagged.
Breakeven breakeven(const SweepReport& report, Label cls);

std::string sweep_csv(const SweepReport& report);
std::string roc_csv(const SweepReport& report);
std::string summary_json(const SweepReport& report);

}  // namespace stc
