#include "stc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "stc/errors.hpp"
#include "stc/parallel.hpp"

namespace stc {

void Confusion::add(Label truth, Label assigned) {
  if (truth == Label::Spam) {
    (assigned == Label::Spam ? ss : sh) += 1;
  } else {
    (assigned == Label::Spam ? hs : hh) += 1;
  }
}

Confusion& Confusion::operator+=(const Confusion& o) {
  ss += o.ss;
  sh += o.sh;
  hs += o.hs;
  hh += o.hh;
  return *this;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricSet metrics(const Confusion& c) {
  if (c.spam_total() == 0) throw ConfigError("ill-posed evaluation: no spam messages tested");
  if (c.ham_total() == 0) throw ConfigError("ill-posed evaluation: no ham messages tested");
  MetricSet m;
  m.sr = ratio(c.ss, c.ss + c.sh);
  m.hr = ratio(c.hh, c.hh + c.hs);
  if (c.ss + c.hs == 0) m.sp_undefined = true;
  else m.sp = ratio(c.ss, c.ss + c.hs);
  if (c.hh + c.sh == 0) m.hp_undefined = true;
  else m.hp = ratio(c.hh, c.hh + c.sh);
  m.tpr = m.sr;
  m.fpr = ratio(c.hs, c.hh + c.hs);
  m.fnr = 1.0 - m.tpr;
  m.sum_errors = m.fpr + m.fnr;
  return m;
}

std::vector<double> threshold_grid(double lo, double hi, double step) {
  if (!(step > 0) || !(lo > 0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw ConfigError("threshold grid needs 0 < lo <= hi and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
  }
  return grid;
}

std::vector<double> default_threshold_grid() { return threshold_grid(0.70, 1.30, 0.02); }

const SweepRow* SweepReport::row_at(double threshold) const {
  for (const auto& row : rows) {
    if (std::abs(row.threshold - threshold) < 1e-9) return &row;
  }
  return nullptr;
}

std::vector<SweepRow> sweep_rows(std::span<const ScoredDocument> docs,
                                 std::span<const double> thresholds) {
  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  for (double th : thresholds) {
    SweepRow row;
    row.threshold = th;
    for (const auto& d : docs) {
      row.confusion.add(d.truth, decide(d.hsr, th));
      if (d.no_evidence) ++row.no_evidence;
    }
    row.metrics = metrics(row.confusion);
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<std::string, std::string>> describe(const ClassifierSpec& spec) {
  if (const auto* st = std::get_if<ScoringConfig>(&spec)) {
    return {{"classifier", "st"},
            {"phi", std::string(to_string(st->phi))},
            {"norm", std::string(to_string(st->norm))},
            {"depth", std::to_string(st->depth)}};
  }
  const auto& nb = std::get<TokenPipeline>(spec);
  return {{"classifier", "nb"},
          {"stopwords", std::to_string(nb.stopwords.size())},
          {"min_token_length", std::to_string(nb.min_token_length)},
          {"stemmer", nb.stem ? "porter1980" : "none"}};
}

namespace {

void check_inputs(const EmailDataSet& eds, const FoldAssignment& folds,
                  std::span<const double> thresholds) {
  if (thresholds.empty()) throw ConfigError("threshold list is empty");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw ConfigError("threshold list is not sorted");
  }
  if (folds.fold_of.size() != eds.size()) {
    throw ConfigError("fold assignment covers " + std::to_string(folds.fold_of.size()) +
                      " messages, data set has " + std::to_string(eds.size()));
  }
  for (int f : folds.fold_of) {
    if (f < 0 || f >= folds.k) throw ConfigError("fold index out of range");
  }
}

SweepReport make_report(const EmailDataSet& eds, const FoldAssignment& folds,
                        const ClassifierSpec& spec, std::span<const ScoredDocument> scored,
                        std::span<const double> thresholds, std::uint64_t seed) {
  SweepReport report;
  report.eds_name = eds.name;
  report.seed = seed;
  report.folds = folds.k;
  report.config = describe(spec);
  report.rows = sweep_rows(scored, thresholds);
  return report;
}

}  // namespace

std::vector<SweepReport> run_cv_st(const EmailDataSet& eds, const FoldAssignment& folds,
                                   std::span<const ScoringConfig> configs,
                                   std::span<const double> thresholds, std::uint64_t seed) {
  check_inputs(eds, folds, thresholds);
  if (configs.empty()) throw ConfigError("no scoring configurations given");
  int depth = 0;
  for (const auto& cfg : configs) {
    validate(cfg);
    depth = std::max(depth, cfg.depth);
  }

  std::vector<std::u32string> texts(eds.size());
  parallel_for(eds.size(), [&](std::size_t i) { texts[i] = eds.messages[i].chars(); });

  std::vector<std::vector<ScoredDocument>> scored(configs.size(),
                                                  std::vector<ScoredDocument>(eds.size()));
  for (int fold = 0; fold < folds.k; ++fold) {
    TreeBuilder ham_builder(depth);
    TreeBuilder spam_builder(depth);
    std::vector<std::size_t> held_out;
    for (std::size_t i = 0; i < eds.size(); ++i) {
      if (folds.fold_of[i] == fold) {
        held_out.push_back(i);
      } else {
        (eds.messages[i].label() == Label::Spam ? spam_builder : ham_builder).insert(texts[i]);
      }
    }
    std::array<ClassTree, 2> trees;
    const std::array<const TreeBuilder*, 2> builders{&ham_builder, &spam_builder};
    parallel_for(2, [&](std::size_t t) { trees[t] = builders[t]->build(); });

    parallel_for(held_out.size() * configs.size(), [&](std::size_t job) {
      const auto c = job % configs.size();
      const auto i = held_out[job / configs.size()];
      const auto v = classify(trees[0], trees[1], texts[i], configs[c]);
      scored[c][i] = ScoredDocument{eds.messages[i].label(), v.hsr, v.no_evidence};
    });
  }

  std::vector<SweepReport> reports;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    reports.push_back(make_report(eds, folds, configs[c], scored[c], thresholds, seed));
  }
  return reports;
}

SweepReport run_cv(const EmailDataSet& eds, const FoldAssignment& folds,
                   const ClassifierSpec& classifier, std::span<const double> thresholds,
                   std::uint64_t seed) {
  if (const auto* st = std::get_if<ScoringConfig>(&classifier)) {
    return run_cv_st(eds, folds, std::span(st, 1), thresholds, seed).front();
  }
  check_inputs(eds, folds, thresholds);
  const auto& pipeline = std::get<TokenPipeline>(classifier);

  std::vector<std::vector<std::string>> tokens(eds.size());
  parallel_for(eds.size(), [&](std::size_t i) { tokens[i] = preprocess(eds.messages[i].text(), pipeline); });

  std::vector<ScoredDocument> scored(eds.size());
  for (int fold = 0; fold < folds.k; ++fold) {
    std::vector<std::vector<std::string>> spam, ham;
    std::vector<std::size_t> held_out;
    for (std::size_t i = 0; i < eds.size(); ++i) {
      if (folds.fold_of[i] == fold) held_out.push_back(i);
      else (eds.messages[i].label() == Label::Spam ? spam : ham).push_back(tokens[i]);
    }
    const auto model = train_nb(spam, ham);
    parallel_for(held_out.size(), [&](std::size_t j) {
      const auto i = held_out[j];
      const auto v = nb_classify(model, tokens[i], 1.0);
      scored[i] = ScoredDocument{eds.messages[i].label(), v.hsr, false};
    });
  }
  return make_report(eds, folds, classifier, scored, thresholds, seed);
}

void check_invariants(const SweepReport& report, std::optional<std::uint64_t> spam_total,
                      std::optional<std::uint64_t> ham_total) {
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    if (spam_total && row.confusion.spam_total() != *spam_total) {
      throw InvariantViolation("confusion conservation: spam total " +
                               std::to_string(row.confusion.spam_total()) + " != " +
                               std::to_string(*spam_total));
    }
    if (ham_total && row.confusion.ham_total() != *ham_total) {
      throw InvariantViolation("confusion conservation: ham total " +
                               std::to_string(row.confusion.ham_total()) + " != " +
                               std::to_string(*ham_total));
    }
    if (i == 0) continue;
    const auto& prev = report.rows[i - 1];
    if (!(row.threshold > prev.threshold)) {
      throw InvariantViolation("thresholds not strictly increasing");
    }
    if (row.metrics.fpr < prev.metrics.fpr) {
      throw InvariantViolation("threshold monotonicity: FPR decreased as the threshold rose");
    }
    if (row.metrics.fnr > prev.metrics.fnr) {
      throw InvariantViolation("threshold monotonicity: FNR increased as the threshold rose");
    }
  }
}

std::vector<RocPoint> roc_points(const SweepReport& report) {
  std::vector<RocPoint> points;
  for (const auto& row : report.rows) points.push_back({row.metrics.fpr, row.metrics.tpr});
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

OptimalThreshold optimal_threshold(const SweepReport& report) {
  if (report.rows.empty()) throw ConfigError("optimal_threshold: empty report");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows) best = std::min(best, row.metrics.sum_errors);
  OptimalThreshold out;
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    if (report.rows[i].metrics.sum_errors > best + 1e-12) continue;
    if (last && *last + 1 != i) out.contiguous = false;
    if (!last) out.metrics = report.rows[i].metrics;
    out.thresholds.push_back(report.rows[i].threshold);
    last = i;
  }
  return out;
}

Breakeven breakeven(const SweepReport& report, Label cls) {
  struct Point {
    double recall;
    double precision;
  };
  std::vector<std::optional<Point>> pts;
  for (const auto& row : report.rows) {
    const auto& m = row.metrics;
    const bool undefined = cls == Label::Spam ? m.sp_undefined : m.hp_undefined;
    if (undefined) pts.emplace_back();
    else if (cls == Label::Spam) pts.push_back(Point{m.sr, m.sp});
    else pts.push_back(Point{m.hr, m.hp});
  }

  Breakeven out;
  for (const auto& p : pts) {
    if (p && std::abs(p->recall - p->precision) <= 1e-9) {
      out.value = std::max(out.value.value_or(0.0), p->recall);
    }
  }
  if (out.value) return out;

  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!pts[i - 1] || !pts[i]) continue;
    const double d0 = pts[i - 1]->recall - pts[i - 1]->precision;
    const double d1 = pts[i]->recall - pts[i]->precision;
    if ((d0 < 0) == (d1 < 0)) continue;
    const double a = d0 / (d0 - d1);
    const double r = pts[i - 1]->recall + a * (pts[i]->recall - pts[i - 1]->recall);
    out.value = std::max(out.value.value_or(0.0), r);
    out.interpolated = true;
  }
  if (!out.value) {
    out.diagnostic = std::string(to_string(cls)) +
                     " recall and precision do not cross within the threshold range";
  }
  return out;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

nlohmann::ordered_json metrics_json(const SweepRow& row) {
  const auto& m = row.metrics;
  return {{"threshold", std::stod(fixed6(row.threshold))},
          {"SS", row.confusion.ss},
          {"SH", row.confusion.sh},
          {"HS", row.confusion.hs},
          {"HH", row.confusion.hh},
          {"SR", m.sr},
          {"SP", m.sp},
          {"HR", m.hr},
          {"HP", m.hp},
          {"TPR", m.tpr},
          {"FPR", m.fpr},
          {"FNR", m.fnr},
          {"sum_errors", m.sum_errors},
          {"no_evidence", row.no_evidence}};
}

}  // namespace

std::string sweep_csv(const SweepReport& report) {
  std::string out = "threshold,SS,SH,HS,HH,SR,SP,HR,HP,TPR,FPR,FNR,sum_errors,no_evidence\n";
  for (const auto& row : report.rows) {
    const auto& c = row.confusion;
    const auto& m = row.metrics;
    out += fixed6(row.threshold) + ',' + std::to_string(c.ss) + ',' + std::to_string(c.sh) + ',' +
           std::to_string(c.hs) + ',' + std::to_string(c.hh) + ',' + fixed6(m.sr) + ',' +
           fixed6(m.sp) + ',' + fixed6(m.hr) + ',' + fixed6(m.hp) + ',' + fixed6(m.tpr) + ',' +
           fixed6(m.fpr) + ',' + fixed6(m.fnr) + ',' + fixed6(m.sum_errors) + ',' +
           std::to_string(row.no_evidence) + '\n';
  }
  return out;
}

std::string roc_csv(const SweepReport& report) {
  std::string out = "fpr,tpr\n";
  for (const auto& p : roc_points(report)) out += fixed6(p.fpr) + ',' + fixed6(p.tpr) + '\n';
  return out;
}

std::string summary_json(const SweepReport& report) {
  nlohmann::ordered_json doc;
  doc["eds"] = report.eds_name;
  doc["seed"] = report.seed;
  doc["folds"] = report.folds;
  auto& cfg = doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config) cfg[k] = v;

  const auto opt = optimal_threshold(report);
  doc["optimal_threshold"] = {{"lo", opt.lo()},
                              {"hi", opt.hi()},
                              {"thresholds", opt.thresholds},
                              {"contiguous", opt.contiguous}};
  if (const auto* at1 = report.row_at(1.0)) doc["metrics_at_1.0"] = metrics_json(*at1);
  else doc["metrics_at_1.0"] = nullptr;
  doc["metrics_at_optimal"] = metrics_json(*report.row_at(opt.lo()));

  for (Label cls : {Label::Spam, Label::Ham}) {
    const auto be = breakeven(report, cls);
    const std::string key = cls == Label::Spam ? "breakeven_spam" : "breakeven_ham";
    if (be.value) doc[key] = {{"value", *be.value}, {"interpolated", be.interpolated}};
    else doc[key] = {{"value", nullptr}, {"diagnostic", be.diagnostic}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace stc
