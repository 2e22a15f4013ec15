#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stc/errors.hpp"
#include "stc/naive_bayes.hpp"

using namespace stc;
using Docs = std::vector<std::vector<std::string>>;

namespace {

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t + " ";
  return out;
}

}  // namespace

TEST_CASE("stoplist") {
  const auto& words = builtin_stopwords();
  CHECK(words.size() == 57);
  const auto p = TokenPipeline::standard();
  CHECK(p.stopwords.size() == 57);
  CHECK(p.stopwords.count("the"));
  CHECK(p.min_token_length == 3);
  CHECK(p.stem);
  CHECK_FALSE(p.id().empty());
}

TEST_CASE("preprocess") {
  const auto p = TokenPipeline::standard();
  CHECK(preprocess("Vi.agr.a now!!", p) == std::vector<std::string>{"viagra", "now"});
  CHECK(preprocess("the a an", p).empty());
  CHECK(preprocess("go", p).empty());
  CHECK(preprocess("", p).empty());
  CHECK(preprocess("Connections\tCONNECTED\nconnecting", p) ==
        std::vector<std::string>{"connect", "connect", "connect"});
  // length is checked before stemming
  CHECK(preprocess("ties", p) == std::vector<std::string>{"ti"});
  CHECK(preprocess("don't", p) == std::vector<std::string>{"dont"});

  auto raw = p;
  raw.stem = false;
  raw.stopwords.clear();
  raw.min_token_length = 1;
  CHECK(preprocess("The Cats, sat.", raw) == std::vector<std::string>{"the", "cats", "sat"});
}

TEST_CASE("preprocess is idempotent on stem-fixed tokens") {
  const auto p = TokenPipeline::standard();
  for (const char* text : {"Cheap meds!! Buy NOW from our store", "connect adjust motor good",
                           "Re: seminar on syntax; please review"}) {
    const auto once = preprocess(text, p);
    bool fixed = true;
    for (const auto& t : once) fixed = fixed && preprocess(t, p) == std::vector<std::string>{t};
    if (fixed) CHECK(preprocess(join(once), p) == once);
  }
  const auto once = preprocess("connect adjust motor good", p);
  CHECK(preprocess(join(once), p) == once);
}

TEST_CASE("custom stoplist file") {
  const auto path = std::filesystem::temp_directory_path() / "stc_test_stop.txt";
  std::ofstream(path) << "# comment\nfoo\n\nbar\n";
  const auto words = load_stopwords(path);
  CHECK(words.size() == 2);
  CHECK(words.count("foo"));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_stopwords(path), ConfigError);
}

TEST_CASE("training") {
  const Docs spam{{"buy", "cheap", "cheap"}, {"buy"}};
  const Docs ham{{"meeting", "cheap"}};
  const auto m = train_nb(spam, ham);
  CHECK(m.prior(Label::Spam) == doctest::Approx(2.0 / 3.0));
  CHECK(m.prior(Label::Spam) + m.prior(Label::Ham) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.vocabulary_size() == 3);
  CHECK(m.class_total(Label::Spam) == 4);
  CHECK(m.class_total(Label::Ham) == 2);
  CHECK(m.word_count(Label::Spam, "cheap") == 2);
  CHECK(m.word_count(Label::Ham, "buy") == 0);
  CHECK(m.word_probability(Label::Spam, "cheap") == doctest::Approx(3.0 / 7.0));
  CHECK(m.word_probability(Label::Ham, "buy") == doctest::Approx(1.0 / 5.0));
  CHECK(m.word_probability(Label::Ham, "never-seen") == doctest::Approx(1.0 / 5.0));

  const auto dump = nlohmann::json::parse(m.dump_json());
  CHECK(dump.contains("vocabulary_size"));

  CHECK_THROWS_AS(train_nb(spam, Docs{}), ConfigError);
  CHECK_THROWS_AS(train_nb(Docs{}, ham), ConfigError);
}

TEST_CASE("priors from class sizes") {
  const auto m = train_nb(Docs(481, {"x"}), Docs(2412, {"y"}));
  CHECK(m.prior(Label::Spam) == doctest::Approx(481.0 / 2893.0).epsilon(1e-15));
  const auto even = train_nb(Docs(400, {"x"}), Docs(400, {"y"}));
  CHECK(even.prior(Label::Ham) == 0.5);
}

TEST_CASE("smoothed distributions sum to one") {
  const Docs spam{{"a", "b", "c", "a"}, {"d", "e"}, {"a"}};
  const Docs ham{{"f", "g"}, {"a", "h", "h", "h"}};
  const auto m = train_nb(spam, ham);
  for (Label c : {Label::Spam, Label::Ham}) {
    double sum = 0.0;
    for (const auto& w : m.vocabulary()) {
      const double p = m.word_probability(c, w);
      CHECK(p > 0.0);
      CHECK(p < 1.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("log scores") {
  const Docs spam{{"buy", "cheap", "cheap"}, {"buy"}};
  const Docs ham{{"meeting", "cheap"}};
  const auto m = train_nb(spam, ham);
  CHECK(nb_log_score(m, Label::Spam, {}) == doctest::Approx(std::log(2.0 / 3.0)));

  const std::vector<std::string> one{"cheap"};
  CHECK(nb_log_score(m, Label::Spam, one) == doctest::Approx(std::log(2.0 / 3.0) + std::log(3.0 / 7.0)));
  CHECK(nb_log_score(m, Label::Ham, one) == doctest::Approx(std::log(1.0 / 3.0) + std::log(2.0 / 5.0)));

  const std::vector<std::string> unseen{"zzz"};
  CHECK(nb_log_score(m, Label::Spam, unseen) - nb_log_score(m, Label::Spam, {}) ==
        doctest::Approx(std::log(1.0 / 7.0)));
  CHECK(nb_log_score(m, Label::Ham, unseen) - nb_log_score(m, Label::Ham, {}) ==
        doctest::Approx(std::log(1.0 / 5.0)));
}

TEST_CASE("classification") {
  const auto sym = train_nb(Docs{{"a", "b"}}, Docs{{"c", "d"}});
  const std::vector<std::string> balanced{"a", "c"};
  const auto v = nb_classify(sym, balanced, 1.0);
  CHECK(v.hsr == doctest::Approx(1.0));
  CHECK(v.label == Label::Ham);

  const std::vector<std::string> spammy{"a", "b", "a"};
  CHECK(nb_classify(sym, spammy, 1.0).label == Label::Spam);
  CHECK(nb_classify(sym, spammy, 1.0).hsr < 1.0);

  // Long documents would underflow a plain product.
  const std::vector<std::string> long_doc(5000, "c");
  const auto long_v = nb_classify(sym, long_doc, 1.0);
  CHECK(long_v.label == Label::Ham);
  CHECK(std::isfinite(long_v.log_hsr));

  const auto m = train_nb(Docs{{"x", "y", "x"}, {"z"}}, Docs{{"y", "w"}, {"w", "x"}});
  for (const auto& doc : {std::vector<std::string>{"x"}, std::vector<std::string>{"y", "w"},
                          std::vector<std::string>{"w", "x", "z"}}) {
    int ham = 0;
    int prev = 1 << 30;
    for (double th = 0.7; th <= 1.3 + 1e-9; th += 0.1) {
      ham = nb_classify(m, doc, th).label == Label::Ham;
      CHECK(ham <= prev);
      prev = ham;
    }
  }
}
