#pragma once

#include <optional>
#include <string_view>

#include "stc/corpus.hpp"
#include "stc/suffix_tree.hpp"

namespace stc {

/// Weight given to a character from its conditional probability.
enum class SignificanceKind { Constant, Linear, Square, Root, Logit, Sigmoid };

/// Match-level normalisation.
enum class MatchNorm { None, Permutation, Length };

std::string_view to_string(SignificanceKind kind);
std::string_view to_string(MatchNorm norm);
std::optional<SignificanceKind> parse_significance(std::string_view name);
std::optional<MatchNorm> parse_match_norm(std::string_view name);

struct ScoringConfig {
  SignificanceKind phi = SignificanceKind::Constant;
  MatchNorm norm = MatchNorm::None;
  /// Matches are cut at this length; must not exceed the trees' depth.
  int depth = kDefaultTreeDepth;
  double threshold = 1.0;
};

/// Throws ConfigError for depth outside [1, 16] or a non-positive or
/// non-finite threshold.
void validate(const ScoringConfig& cfg);

inline constexpr double kLogitEpsilon = 1e-6;

/// Maps p in [0, 1] onto [0, 1]. Logit clamps p to [eps, 1 - eps] and both
/// S-curves are rescaled affinely so that 0 -> 0 and 1 -> 1. Throws
/// ContractViolation for p outside [0, 1] or NaN.
double significance(SignificanceKind kind, double p);

/// Longest prefix of a query suffix that is also a root path of the tree.
struct Match {
  std::u32string_view path;
  /// Node at the end of path; the root when path is empty.
  NodeId terminal;

  bool empty() const { return path.empty(); }
  std::size_t length() const { return path.size(); }
};

/// max_length < 0 means the tree's depth limit.
Match longest_match(const ClassTree& tree, std::u32string_view s, int max_length = -1);

/// f(m) over the summed frequencies of every root path of the same length
/// whose characters are a rearrangement of m's (m included).
double permutation_weight(const ClassTree& tree, const Match& m);
/// f(m) over the summed frequencies of all nodes on level |m|.
double length_weight(const ClassTree& tree, const Match& m);

/// norm(m) times the summed significance of every character of m, each
/// taken with its conditional probability. Zero for an empty match.
double match_score(const ClassTree& tree, const Match& m, const ScoringConfig& cfg);

/// Sum of match_score over the longest match of every suffix of doc.
double document_score(const ClassTree& tree, std::u32string_view doc, const ScoringConfig& cfg);

struct Verdict {
  Label label = Label::Ham;
  /// ham_score / spam_score; +inf when the spam score is zero.
  double hsr = 1.0;
  double ham_score = 0.0;
  double spam_score = 0.0;
  /// Both scores zero: nothing in the document was seen in either class.
  bool no_evidence = false;
};

/// Ham iff hsr >= threshold. Both scores zero gives Ham with no_evidence set.
Label decide(double hsr, double threshold);
Verdict verdict_from_scores(double ham_score, double spam_score, double threshold);

/// Throws ConfigError if either tree is shallower than cfg.depth.
Verdict classify(const ClassTree& ham_tree, const ClassTree& spam_tree, std::u32string_view doc,
                 const ScoringConfig& cfg);

}  // namespace stc
