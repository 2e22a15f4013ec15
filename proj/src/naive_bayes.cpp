#include "stc/naive_bayes.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "stc/errors.hpp"
#include "stc/porter_stemmer.hpp"
#include "stc/st_classifier.hpp"
#include "stc/text.hpp"

namespace stc {
namespace {

#include "stopwords_builtin.inc"

bool is_space(char32_t c) {
  switch (c) {
    case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_word_char(char32_t c) {
  if (c < 0x80) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  }
  // Latin-1 symbols, general punctuation and the replacement character count
  // as punctuation; every other non-ASCII codepoint is taken as a letter.
  if ((c >= 0xA1 && c <= 0xBF) || c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2010 && c <= 0x205E) return false;
  if (c == kReplacementChar) return false;
  return true;
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

}  // namespace

const std::vector<std::string_view>& builtin_stopwords() {
  static const std::vector<std::string_view> words(std::begin(kBuiltinStopwords),
                                                   std::end(kBuiltinStopwords));
  return words;
}

TokenPipeline TokenPipeline::standard() {
  TokenPipeline p;
  for (auto w : builtin_stopwords()) p.stopwords.emplace(w);
  return p;
}

std::string TokenPipeline::id() const {
  return "nb:stop" + std::to_string(stopwords.size()) + ":min" + std::to_string(min_token_length) +
         (stem ? ":porter1980" : ":nostem");
}

std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read stopword file: " + path.string());
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    words.insert(line);
  }
  return words;
}

std::vector<std::string> preprocess(std::string_view text, const TokenPipeline& pipeline) {
  const auto chars = decode_utf8(text).text;
  std::vector<std::string> tokens;
  std::u32string word;
  auto flush = [&] {
    if (word.empty()) return;
    for (auto& c : word) c = to_lower(c);
    std::string token = encode_utf8(word);
    const auto length = word.size();
    word.clear();
    if (pipeline.stopwords.contains(token)) return;
    if (length < pipeline.min_token_length) return;
    tokens.push_back(pipeline.stem ? porter_stem(token) : std::move(token));
  };
  for (char32_t c : chars) {
    if (is_space(c)) flush();
    else if (is_word_char(c)) word.push_back(c);
  }
  flush();
  return tokens;
}

double NBModel::prior(Label c) const {
  return static_cast<double>(doc_counts_[idx(c)]) /
         static_cast<double>(doc_counts_[0] + doc_counts_[1]);
}

std::uint64_t NBModel::word_count(Label c, std::string_view word) const {
  const auto& counts = word_counts_[idx(c)];
  const auto it = counts.find(std::string(word));
  return it == counts.end() ? 0 : it->second;
}

double NBModel::word_probability(Label c, std::string_view word) const {
  return (1.0 + static_cast<double>(word_count(c, word))) /
         (static_cast<double>(vocabulary_.size()) + static_cast<double>(class_totals_[idx(c)]));
}

std::string NBModel::dump_json() const {
  nlohmann::ordered_json doc;
  doc["priors"] = {{"spam", prior(Label::Spam)}, {"ham", prior(Label::Ham)}};
  doc["doc_counts"] = {{"spam", doc_counts_[0]}, {"ham", doc_counts_[1]}};
  doc["class_totals"] = {{"spam", class_totals_[0]}, {"ham", class_totals_[1]}};
  doc["vocabulary_size"] = vocabulary_.size();
  for (Label c : {Label::Spam, Label::Ham}) {
    nlohmann::json counts = nlohmann::json::object();  // sorted keys
    for (const auto& [w, n] : word_counts_[idx(c)]) counts[w] = n;
    doc["word_counts"][std::string(to_string(c))] = std::move(counts);
  }
  return doc.dump(2) + "\n";
}

NBModel train_nb(std::span<const std::vector<std::string>> spam_docs,
                 std::span<const std::vector<std::string>> ham_docs) {
  if (spam_docs.empty() || ham_docs.empty()) {
    throw ConfigError("naive Bayes training needs at least one document per class");
  }
  NBModel model;
  auto tally = [&model](std::span<const std::vector<std::string>> docs, std::size_t c) {
    model.doc_counts_[c] = docs.size();
    for (const auto& doc : docs) {
      for (const auto& w : doc) {
        ++model.word_counts_[c][w];
        ++model.class_totals_[c];
      }
    }
    for (const auto& [w, n] : model.word_counts_[c]) model.vocabulary_.insert(w);
  };
  tally(spam_docs, 0);
  tally(ham_docs, 1);
  return model;
}

double nb_log_score(const NBModel& model, Label c, std::span<const std::string> tokens) {
  double score = std::log(model.prior(c));
  for (const auto& t : tokens) score += std::log(model.word_probability(c, t));
  return score;
}

NbVerdict nb_classify(const NBModel& model, std::span<const std::string> tokens, double threshold) {
  NbVerdict v;
  v.log_hsr = nb_log_score(model, Label::Ham, tokens) - nb_log_score(model, Label::Spam, tokens);
  v.hsr = std::exp(v.log_hsr);
  v.label = decide(v.hsr, threshold);
  return v;
}

}  // namespace stc
