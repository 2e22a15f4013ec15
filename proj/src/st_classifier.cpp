#include "stc/st_classifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "stc/errors.hpp"

namespace stc {
namespace {

constexpr std::array<std::pair<SignificanceKind, std::string_view>, 6> kSignificanceNames{{
    {SignificanceKind::Constant, "constant"},
    {SignificanceKind::Linear, "linear"},
    {SignificanceKind::Square, "square"},
    {SignificanceKind::Root, "root"},
    {SignificanceKind::Logit, "logit"},
    {SignificanceKind::Sigmoid, "sigmoid"},
}};

constexpr std::array<std::pair<MatchNorm, std::string_view>, 3> kNormNames{{
    {MatchNorm::None, "none"},
    {MatchNorm::Permutation, "permutation"},
    {MatchNorm::Length, "length"},
}};

double logit(double p) { return std::log(p) - std::log1p(-p); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

const double kLogitLo = logit(kLogitEpsilon);
const double kLogitHi = logit(1.0 - kLogitEpsilon);
const double kSigmoidLo = sigmoid(0.0);
const double kSigmoidHi = sigmoid(1.0);

void require_depth(const ClassTree& tree, int depth, std::string_view which) {
  if (tree.depth_limit() < depth) {
    throw ConfigError(std::string(which) + " tree depth " + std::to_string(tree.depth_limit()) +
                      " is less than scoring depth " + std::to_string(depth));
  }
}

}  // namespace

std::string_view to_string(SignificanceKind kind) {
  for (const auto& [k, name] : kSignificanceNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::string_view to_string(MatchNorm norm) {
  for (const auto& [k, name] : kNormNames) {
    if (k == norm) return name;
  }
  return "?";
}

std::optional<SignificanceKind> parse_significance(std::string_view name) {
  for (const auto& [k, n] : kSignificanceNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::optional<MatchNorm> parse_match_norm(std::string_view name) {
  for (const auto& [k, n] : kNormNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

void validate(const ScoringConfig& cfg) {
  if (cfg.depth < kMinTreeDepth || cfg.depth > kMaxTreeDepth) {
    throw ConfigError("scoring depth must be in [1, 16], got " + std::to_string(cfg.depth));
  }
  if (!(cfg.threshold > 0.0) || !std::isfinite(cfg.threshold)) {
    throw ConfigError("threshold must be a positive finite number");
  }
}

double significance(SignificanceKind kind, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ContractViolation("significance: probability " + std::to_string(p) + " outside [0, 1]");
  }
  switch (kind) {
    case SignificanceKind::Constant:
      return 1.0;
    case SignificanceKind::Linear:
      return p;
    case SignificanceKind::Square:
      return p * p;
    case SignificanceKind::Root:
      return std::sqrt(p);
    case SignificanceKind::Logit: {
      const double c = std::clamp(p, kLogitEpsilon, 1.0 - kLogitEpsilon);
      return (logit(c) - kLogitLo) / (kLogitHi - kLogitLo);
    }
    case SignificanceKind::Sigmoid:
      return (sigmoid(p) - kSigmoidLo) / (kSigmoidHi - kSigmoidLo);
  }
  return 0.0;
}

Match longest_match(const ClassTree& tree, std::u32string_view s, int max_length) {
  const auto cap = static_cast<std::size_t>(max_length < 0 ? tree.depth_limit() : max_length);
  const auto limit = std::min(cap, s.size());
  NodeId node = ClassTree::root();
  std::size_t len = 0;
  while (len < limit) {
    const auto next = tree.child(node, s[len]);
    if (!next) break;
    node = *next;
    ++len;
  }
  return Match{s.substr(0, len), node};
}

namespace {

// Sum of frequencies of level-|m| root paths spelling a rearrangement of m.
// Walks only children whose label still has multiplicity left.
std::uint64_t permutation_mass(const ClassTree& tree, NodeId node,
                               std::vector<std::pair<char32_t, int>>& remaining, std::size_t left) {
  if (left == 0) return tree.frequency(node);
  std::uint64_t sum = 0;
  for (auto& [c, count] : remaining) {
    if (count == 0) continue;
    const auto next = tree.child(node, c);
    if (!next) continue;
    --count;
    sum += permutation_mass(tree, *next, remaining, left - 1);
    ++count;
  }
  return sum;
}

}  // namespace

double permutation_weight(const ClassTree& tree, const Match& m) {
  if (m.empty()) throw ContractViolation("permutation_weight: empty match");
  const auto found = tree.find(m.path);
  if (!found) throw ContractViolation("permutation_weight: match not present in tree");

  std::u32string sorted(m.path);
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<char32_t, int>> multiset;
  for (char32_t c : sorted) {
    if (multiset.empty() || multiset.back().first != c) multiset.emplace_back(c, 0);
    ++multiset.back().second;
  }
  const auto mass = permutation_mass(tree, ClassTree::root(), multiset, m.length());
  return static_cast<double>(tree.frequency(*found)) / static_cast<double>(mass);
}

double length_weight(const ClassTree& tree, const Match& m) {
  if (m.empty()) throw ContractViolation("length_weight: empty match");
  const auto found = tree.find(m.path);
  if (!found) throw ContractViolation("length_weight: match not present in tree");
  return static_cast<double>(tree.frequency(*found)) /
         static_cast<double>(tree.level_frequency_sum(static_cast<int>(m.length())));
}

namespace {

double norm_weight(const ClassTree& tree, const Match& m, MatchNorm norm) {
  switch (norm) {
    case MatchNorm::None:
      return 1.0;
    case MatchNorm::Permutation:
      return permutation_weight(tree, m);
    case MatchNorm::Length:
      return length_weight(tree, m);
  }
  return 1.0;
}

}  // namespace

double match_score(const ClassTree& tree, const Match& m, const ScoringConfig& cfg) {
  if (m.empty()) return 0.0;
  double sum = 0.0;
  NodeId node = ClassTree::root();
  for (char32_t c : m.path) {
    const auto next = tree.child(node, c);
    if (!next) throw ContractViolation("match_score: match not present in tree");
    sum += significance(cfg.phi, static_cast<double>(tree.frequency(*next)) /
                                     static_cast<double>(tree.child_frequency_sum(node)));
    node = *next;
  }
  return norm_weight(tree, m, cfg.norm) * sum;
}

double document_score(const ClassTree& tree, std::u32string_view doc, const ScoringConfig& cfg) {
  require_depth(tree, cfg.depth, "class");
  const auto cap = static_cast<std::size_t>(cfg.depth);
  double total = 0.0;
  // Fused form of longest_match + match_score: the significance terms are
  // accumulated along the same walk that finds the match.
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto limit = std::min(cap, doc.size() - i);
    NodeId node = ClassTree::root();
    std::size_t len = 0;
    double sum = 0.0;
    while (len < limit) {
      const auto next = tree.child(node, doc[i + len]);
      if (!next) break;
      if (cfg.phi == SignificanceKind::Constant) {
        sum += 1.0;
      } else {
        sum += significance(cfg.phi, static_cast<double>(tree.frequency(*next)) /
                                         static_cast<double>(tree.child_frequency_sum(node)));
      }
      node = *next;
      ++len;
    }
    if (len == 0) continue;
    if (cfg.norm != MatchNorm::None) sum *= norm_weight(tree, Match{doc.substr(i, len), node}, cfg.norm);
    total += sum;
  }
  return total;
}

Label decide(double hsr, double threshold) { return hsr >= threshold ? Label::Ham : Label::Spam; }

Verdict verdict_from_scores(double ham_score, double spam_score, double threshold) {
  Verdict v;
  v.ham_score = ham_score;
  v.spam_score = spam_score;
  if (ham_score == 0.0 && spam_score == 0.0) {
    // +inf keeps the Ham verdict stable under any threshold.
    v.hsr = std::numeric_limits<double>::infinity();
    v.no_evidence = true;
    v.label = Label::Ham;
    return v;
  }
  if (spam_score == 0.0) {
    v.hsr = std::numeric_limits<double>::infinity();
  } else {
    v.hsr = ham_score / spam_score;
  }
  v.label = decide(v.hsr, threshold);
  return v;
}

Verdict classify(const ClassTree& ham_tree, const ClassTree& spam_tree, std::u32string_view doc,
                 const ScoringConfig& cfg) {
  validate(cfg);
  require_depth(ham_tree, cfg.depth, "ham");
  require_depth(spam_tree, cfg.depth, "spam");
  return verdict_from_scores(document_score(ham_tree, doc, cfg), document_score(spam_tree, doc, cfg),
                             cfg.threshold);
}

}  // namespace stc
