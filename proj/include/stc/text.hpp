#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace stc {

struct DecodeResult {
  std::u32string text;
  /// Number of U+FFFD substitutions made for malformed input.
  std::size_t replacements = 0;
};

inline constexpr char32_t kReplacementChar = 0xFFFD;

/// Permissive UTF-8 decode. Each maximal ill-formed subsequence becomes one
/// U+FFFD; nothing is dropped.
DecodeResult decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view text);

/// Decode then re-encode, so the result is always valid UTF-8.
std::string sanitize_utf8(std::string_view bytes, std::size_t* replacements = nullptr);

}  // namespace stc
