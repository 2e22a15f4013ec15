#pragma once

// Small generated email corpora with overlapping class vocabularies.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "stc/corpus.hpp"

namespace synthetic {

inline const std::vector<std::string>& spam_words() {
  static const std::vector<std::string> w{"free",  "cheap", "offer", "money", "click", "viagra",
                                          "win",   "cash",  "deal",  "buy",   "now",   "prize",
                                          "order", "today", "best",  "price"};
  return w;
}

inline const std::vector<std::string>& ham_words() {
  static const std::vector<std::string> w{"seminar", "syntax",   "paper",  "review",  "language",
                                          "corpus",  "workshop", "grammar", "lexicon", "today",
                                          "conference", "deadline", "abstract", "best",  "thanks"};
  return w;
}

// Mostly words of its own class, with some drawn from the other.
inline std::string message_text(std::mt19937_64& rng, stc::Label label, double noise = 0.2) {
  const auto& own = label == stc::Label::Spam ? spam_words() : ham_words();
  const auto& other = label == stc::Label::Spam ? ham_words() : spam_words();
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> len(3, 25);
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  std::string subject = pick(own) + " " + pick(coin(rng) < noise ? other : own);
  std::string body;
  for (int i = 0, n = len(rng); i < n; ++i) {
    if (i) body += (i % 9 == 0) ? ".\n" : " ";
    body += pick(coin(rng) < noise ? other : own);
  }
  return "From: someone@example.org\nSubject: " + subject + "\n\n" + body + "\n";
}

inline std::vector<stc::Message> messages(std::mt19937_64& rng, stc::Label label, int n,
                                          double noise = 0.2) {
  std::vector<stc::Message> out;
  for (int i = 0; i < n; ++i) {
    out.emplace_back(stc::parse_email(message_text(rng, label, noise)), label,
                     std::string(stc::to_string(label)) + "/" + std::to_string(i));
  }
  return out;
}

inline stc::EmailDataSet dataset(int n_spam, int n_ham, std::uint64_t seed, double noise = 0.2) {
  std::mt19937_64 rng(seed);
  stc::EmailDataSet eds;
  eds.name = "synthetic";
  eds.seed = seed;
  for (auto& m : messages(rng, stc::Label::Spam, n_spam, noise)) eds.messages.push_back(std::move(m));
  for (auto& m : messages(rng, stc::Label::Ham, n_ham, noise)) eds.messages.push_back(std::move(m));
  return eds;
}

// <dir>/spam/NNNN and <dir>/ham/NNNN
inline void write_corpus(const std::filesystem::path& dir, int n_spam, int n_ham,
                         std::uint64_t seed, double noise = 0.2) {
  std::mt19937_64 rng(seed);
  for (auto [label, n] : {std::pair{stc::Label::Spam, n_spam}, std::pair{stc::Label::Ham, n_ham}}) {
    const auto sub = dir / std::string(stc::to_string(label));
    std::filesystem::create_directories(sub);
    for (int i = 0; i < n; ++i) {
      char name[16];
      std::snprintf(name, sizeof name, "%04d", i);
      std::ofstream(sub / name, std::ios::binary) << message_text(rng, label, noise);
    }
  }
}

}  // namespace synthetic
