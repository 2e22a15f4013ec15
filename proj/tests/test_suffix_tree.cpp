#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "stc/errors.hpp"
#include "stc/suffix_tree.hpp"

using namespace stc;

namespace {

ClassTree meet_feet() { return build_class_tree(std::vector<std::u32string>{U"meet", U"feet"}, 8); }

std::uint32_t freq(const ClassTree& t, std::u32string_view path) {
  const auto n = t.find(path);
  REQUIRE(n.has_value());
  return t.frequency(*n);
}

}  // namespace

TEST_CASE("single string meet") {
  TreeBuilder b(8);
  b.insert(U"meet");
  const auto t = b.build();
  CHECK(t.node_count() == 9);
  for (auto s : {U"meet", U"mee", U"me", U"m", U"eet", U"ee", U"e", U"et", U"t"})
    CHECK(t.find(s).has_value());
  CHECK(freq(t, U"e") == 2);
}

TEST_CASE("meet and feet") {
  const auto t = meet_feet();
  CHECK(t.node_count() == 13);
  const auto stats = tree_stats(t);
  CHECK(stats.node_count == 13);
  CHECK(stats.frequency_sum == 20);
  CHECK(stats.per_level_frequency_sums[1] == 8);
  CHECK(t.level_frequency_sum(1) == 8);
  CHECK(t.char_count() == 8);
  CHECK(t.doc_count() == 2);

  CHECK(freq(t, U"m") == 1);
  CHECK(freq(t, U"e") == 4);
  CHECK(freq(t, U"t") == 2);
  CHECK(freq(t, U"f") == 1);
  CHECK(freq(t, U"ee") == 2);
  CHECK(freq(t, U"eet") == 2);
  CHECK_FALSE(t.find(U"zz").has_value());

  CHECK(conditional_probability(t, *t.find(U"ee")) == doctest::Approx(0.5));
  CHECK(conditional_probability(t, *t.find(U"eet")) == 1.0);
  CHECK(total_probability(t, *t.find(U"ee")) == doctest::Approx(2.0 / 6.0));
  CHECK(total_probability(t, *t.find(U"e")) == doctest::Approx(0.5));
}

TEST_CASE("sequential insertion equals batch build") {
  TreeBuilder b(8);
  b.insert(U"meet");
  b.insert(U"feet");
  CHECK(b.build() == meet_feet());
}

TEST_CASE("depth limit") {
  const auto t = build_class_tree(std::vector<std::u32string>{U"meet"}, 2);
  CHECK(t.node_count() == 6);
  CHECK(t.populated_depth() == 2);
  CHECK_FALSE(t.find(U"mee").has_value());

  const auto aa = build_class_tree(std::vector<std::u32string>{U"aa"}, 1);
  CHECK(aa.node_count() == 1);
  CHECK(freq(aa, U"a") == 2);
}

TEST_CASE("empty inputs") {
  const auto t = build_class_tree({}, 8);
  CHECK(t.node_count() == 0);
  CHECK(t.populated_depth() == 0);
  const auto stats = tree_stats(t);
  CHECK(stats.node_count == 0);
  CHECK(stats.frequency_sum == 0);
  CHECK(stats.density == 0.0);

  TreeBuilder b(4);
  b.insert(U"");
  CHECK(b.doc_count() == 0);
  CHECK(b.build().node_count() == 0);
}

TEST_CASE("single node tree") {
  const auto t = build_class_tree(std::vector<std::u32string>{U"a"}, 8);
  const auto a = *t.find(U"a");
  CHECK(conditional_probability(t, a) == 1.0);
  CHECK(total_probability(t, a) == 1.0);
  CHECK(t.parent(a) == ClassTree::root());
  CHECK_FALSE(t.parent(ClassTree::root()).has_value());
  CHECK(t.path(a) == U"a");
}

TEST_CASE("depth out of range") {
  CHECK_THROWS_AS(TreeBuilder(0), ConfigError);
  CHECK_THROWS_AS(TreeBuilder(17), ConfigError);
  CHECK_THROWS_AS(build_class_tree({}, -1), ConfigError);
  CHECK_NOTHROW(TreeBuilder(16));
}

TEST_CASE("root has no probability") {
  const auto t = meet_feet();
  CHECK_THROWS_AS(conditional_probability(t, ClassTree::root()), ContractViolation);
  CHECK_THROWS_AS(total_probability(t, ClassTree::root()), ContractViolation);
}

TEST_CASE("density counts internal nodes") {
  // ab: root -> {a, b}, a -> {b}
  const auto t = build_class_tree(std::vector<std::u32string>{U"ab"}, 8);
  CHECK(tree_stats(t).density == doctest::Approx(1.5));
}

TEST_CASE("randomized oracles") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    const int depth = 1 + static_cast<int>(rng() % 8);
    const auto docs = oracle::random_docs(rng, 20, 50);
    const auto counts = oracle::substring_counts(docs, depth);
    const auto t = build_class_tree(docs, depth);

    REQUIRE(t.node_count() == counts.size());
    std::uint64_t total = 0;
    for (const auto& [s, f] : counts) {
      const auto n = t.find(s);
      REQUIRE(n.has_value());
      CHECK(t.frequency(*n) == f);
      CHECK(t.path(*n) == s);
      CHECK(t.level(*n) == static_cast<int>(s.size()));
      total += f;
    }
    const auto stats = tree_stats(t);
    CHECK(stats.frequency_sum == total);
    std::uint64_t chars = 0;
    for (const auto& d : docs) chars += d.size();
    CHECK(t.char_count() == chars);
    if (chars > 0) CHECK(stats.per_level_frequency_sums[1] == chars);
  }
}

TEST_CASE("probability normalisation and monotone frequency") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 100; ++round) {
    const int depth = 1 + static_cast<int>(rng() % 8);
    const auto t = build_class_tree(oracle::random_docs(rng, 20, 50, U"abcdefgh\n "), depth);
    for (std::uint32_t i = 0; i <= t.node_count(); ++i) {
      const NodeId n{i};
      const auto kids = t.children(n);
      if (kids.empty()) continue;
      double sum = 0.0;
      char32_t prev = 0;
      bool first = true;
      for (const auto c : kids) {
        sum += conditional_probability(t, c);
        if (n != ClassTree::root()) CHECK(t.frequency(n) >= t.frequency(c));
        CHECK(t.frequency(c) >= 1);
        if (!first) CHECK(t.label(c) > prev);
        prev = t.label(c);
        first = false;
        CHECK(t.parent(c) == n);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (int level = 1; level <= t.populated_depth(); ++level) {
      double sum = 0.0;
      for (const auto n : t.level_nodes(level)) sum += total_probability(t, n);
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("insertion order independence") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    auto docs = oracle::random_docs(rng, 12, 30);
    const auto t = build_class_tree(docs, 5);
    std::shuffle(docs.begin(), docs.end(), rng);
    CHECK(build_class_tree(docs, 5) == t);
  }
}

TEST_CASE("non-ascii characters") {
  const auto t = build_class_tree(std::vector<std::u32string>{U"café \U0001F600"}, 3);
  CHECK(freq(t, U"é \U0001F600") == 1);
  CHECK(t.char_count() == 6);
}

TEST_CASE("profile round trip") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 20; ++round) {
    const auto t = build_class_tree(oracle::random_docs(rng, 10, 40, U"abé\U0001F600\n\t\""), 6);
    std::stringstream buf;
    write_profile(t, buf);
    const auto text = buf.str();
    std::stringstream in(text);
    const auto back = read_profile(in);
    CHECK(back == t);
    std::stringstream again;
    write_profile(back, again);
    CHECK(again.str() == text);
  }
}

TEST_CASE("profile format") {
  const auto t = build_class_tree(std::vector<std::u32string>{U"ab"}, 2);
  std::stringstream buf;
  write_profile(t, buf);
  CHECK(buf.str() ==
        "{\"depth\":2,\"doc_count\":1,\"char_count\":2,\"root\":{\"k\":["
        "{\"c\":97,\"f\":1,\"k\":[{\"c\":98,\"f\":1,\"k\":[]}]},"
        "{\"c\":98,\"f\":1,\"k\":[]}]}}\n");
}

TEST_CASE("malformed profiles are rejected") {
  const char* bad[] = {
      "",
      "{",
      "[]",
      "{\"depth\":0,\"doc_count\":1,\"char_count\":1,\"root\":{\"k\":[{\"c\":97,\"f\":1,\"k\":[]}]}}",
      "{\"depth\":2,\"doc_count\":1,\"char_count\":2,\"root\":{\"k\":[{\"c\":97,\"f\":1,\"k\":[]}]}}",
      "{\"depth\":2,\"doc_count\":1,\"char_count\":1,\"root\":{\"k\":[{\"c\":97,\"f\":0,\"k\":[]}]}}",
      "{\"depth\":2,\"doc_count\":1,\"char_count\":2,\"root\":{\"k\":[{\"c\":98,\"f\":1,\"k\":[]},"
      "{\"c\":97,\"f\":1,\"k\":[]}]}}",
      "{\"depth\":2,\"doc_count\":1,\"char_count\":1,\"root\":{\"k\":[{\"c\":97,\"f\":1,\"k\":["
      "{\"c\":98,\"f\":2,\"k\":[]}]}]}}",
      "{\"depth\":1,\"doc_count\":1,\"char_count\":1,\"root\":{\"k\":[{\"c\":97,\"f\":1,\"k\":["
      "{\"c\":98,\"f\":1,\"k\":[]}]}]}}",
      "{\"depth\":2,\"doc_count\":1,\"char_count\":1,\"root\":{\"k\":[{\"f\":1,\"k\":[]}]}}",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    std::stringstream in(text);
    CHECK_THROWS_AS(read_profile(in), ConfigError);
  }
}
