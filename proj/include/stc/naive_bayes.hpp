#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stc/corpus.hpp"

namespace stc {

/// Word-level preprocessing for the baseline: strip punctuation, split on
/// whitespace, lowercase, drop stopwords, drop short words, stem.
struct TokenPipeline {
  std::set<std::string, std::less<>> stopwords;
  /// Tokens shorter than this (in characters, before stemming) are dropped.
  std::size_t min_token_length = 3;
  bool stem = true;

  /// The shipped 57-word stoplist, minimum length 3, Porter stemming.
  static TokenPipeline standard();
  /// Short identifier echoed in reports.
  std::string id() const;
};

/// One word per line; blank lines and lines starting with '#' are skipped.
/// Throws ConfigError if the file cannot be read.
std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path);
const std::vector<std::string_view>& builtin_stopwords();

/// Punctuation (anything neither alphanumeric nor whitespace) is deleted in
/// place, so "Vi.agr.a" becomes "Viagra" rather than three fragments.
std::vector<std::string> preprocess(std::string_view text, const TokenPipeline& pipeline);

/// Multinomial naive Bayes with add-one smoothing over a vocabulary shared by
/// both classes.
class NBModel {
 public:
  double prior(Label c) const;
  std::size_t doc_count(Label c) const { return doc_counts_[idx(c)]; }
  std::uint64_t class_total(Label c) const { return class_totals_[idx(c)]; }
  std::uint64_t word_count(Label c, std::string_view word) const;
  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  const std::set<std::string, std::less<>>& vocabulary() const { return vocabulary_; }

  /// (1 + N_wc) / (M + sum_k N_kc)
  double word_probability(Label c, std::string_view word) const;

  /// Priors, per-class counts and vocabulary size as JSON.
  std::string dump_json() const;

 private:
  friend NBModel train_nb(std::span<const std::vector<std::string>>,
                          std::span<const std::vector<std::string>>);
  static std::size_t idx(Label c) { return c == Label::Spam ? 0 : 1; }

  std::array<std::size_t, 2> doc_counts_{};
  std::array<std::uint64_t, 2> class_totals_{};
  std::array<std::unordered_map<std::string, std::uint64_t>, 2> word_counts_;
  std::set<std::string, std::less<>> vocabulary_;
};

/// Throws ConfigError if either class has no documents.
NBModel train_nb(std::span<const std::vector<std::string>> spam_docs,
                 std::span<const std::vector<std::string>> ham_docs);

/// log P(c) + sum over tokens of log P(token | c). The evidence term P(d) is
/// left out; it cancels in the ham/spam ratio.
double nb_log_score(const NBModel& model, Label c, std::span<const std::string> tokens);

struct NbVerdict {
  Label label = Label::Ham;
  double hsr = 1.0;
  double log_hsr = 0.0;
};

/// Ham iff hsr >= threshold. The ratio is formed in the log domain.
NbVerdict nb_classify(const NBModel& model, std::span<const std::string> tokens, double threshold);

}  // namespace stc
