#include "stc/porter_stemmer.hpp"

#include <algorithm>
#include <array>

namespace stc {
namespace {

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : b_(word) {}

  std::string run() {
    if (b_.size() <= 2) return b_;
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return b_;
  }

 private:
  // Is b_[i] a consonant? 'y' is a consonant at the start or after a vowel.
  bool cons(std::size_t i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // m() for the first `len` characters: the number of VC sequences.
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && cons(i)) ++i;
    while (i < len) {
      while (i < len && !cons(i)) ++i;
      if (i >= len) break;
      while (i < len && cons(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  // *d: ends with a double consonant.
  bool double_cons(std::size_t len) const {
    return len >= 2 && b_[len - 1] == b_[len - 2] && cons(len - 1);
  }

  // *o: ends cvc where the final c is not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3 || !cons(len - 1) || cons(len - 2) || !cons(len - 3)) return false;
    const char c = b_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) const {
    return b_.size() >= s.size() && std::string_view(b_).substr(b_.size() - s.size()) == s;
  }

  std::size_t stem_len(std::string_view suffix) const { return b_.size() - suffix.size(); }

  void replace(std::string_view suffix, std::string_view with) {
    b_.resize(stem_len(suffix));
    b_.append(with);
  }

  // Longest matching suffix wins; if its condition fails the step does nothing.
  template <std::size_t N>
  void apply_first(const std::array<Rule, N>& rules, int min_measure) {
    for (const auto& r : rules) {
      if (!ends(r.suffix)) continue;
      if (measure(stem_len(r.suffix)) > min_measure) replace(r.suffix, r.replacement);
      return;
    }
  }

  void step1a() {
    if (ends("sses")) replace("sses", "ss");
    else if (ends("ies")) replace("ies", "i");
    else if (ends("ss")) return;
    else if (ends("s")) replace("s", "");
  }

  void step1b() {
    if (ends("eed")) {
      if (measure(stem_len("eed")) > 0) replace("eed", "ee");
      return;
    }
    bool stripped = false;
    for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
      if (ends(suffix) && has_vowel(stem_len(suffix))) {
        replace(suffix, "");
        stripped = true;
        break;
      }
    }
    if (!stripped) return;
    if (ends("at")) replace("at", "ate");
    else if (ends("bl")) replace("bl", "ble");
    else if (ends("iz")) replace("iz", "ize");
    else if (double_cons(b_.size())) {
      const char c = b_.back();
      if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
    } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
      b_.push_back('e');
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(b_.size() - 1)) b_.back() = 'i';
  }

  void step2() {
    static constexpr std::array<Rule, 20> rules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},    {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
    }};
    static const auto ordered = sorted_longest_first(rules);
    apply_first(ordered, 0);
  }

  void step3() {
    static constexpr std::array<Rule, 7> rules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    static const auto ordered = sorted_longest_first(rules);
    apply_first(ordered, 0);
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> suffixes{
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
    std::string_view best;
    for (auto s : suffixes) {
      if (ends(s) && s.size() > best.size()) best = s;
    }
    if (best.empty()) return;
    const auto len = stem_len(best);
    if (measure(len) <= 1) return;
    if (best == "ion" && !(len > 0 && (b_[len - 1] == 's' || b_[len - 1] == 't'))) return;
    b_.resize(len);
  }

  void step5a() {
    if (!ends("e")) return;
    const auto len = b_.size() - 1;
    const int m = measure(len);
    if (m > 1 || (m == 1 && !cvc(len))) b_.pop_back();
  }

  void step5b() {
    if (b_.size() >= 2 && b_.back() == 'l' && double_cons(b_.size()) && measure(b_.size()) > 1) {
      b_.pop_back();
    }
  }

  template <std::size_t N>
  static std::array<Rule, N> sorted_longest_first(std::array<Rule, N> rules) {
    std::stable_sort(rules.begin(), rules.end(),
                     [](const Rule& a, const Rule& b) { return a.suffix.size() > b.suffix.size(); });
    return rules;
  }

  std::string b_;
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

}  // namespace stc
