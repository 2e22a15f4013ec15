#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace stc {

/// Seeded source used for every sampling and shuffling step.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions and std::shuffle are not, so bounded
/// draws and shuffles are done here by hand: bounded draws use rejection on
/// the raw 64-bit output, and shuffles are Fisher-Yates from the back. Any
/// implementation following these three rules reproduces our samples.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stc
