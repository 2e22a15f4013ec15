#include "stc/text.hpp"

#include <cstdint>

namespace stc {
namespace {

bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

}  // namespace

DecodeResult decode_utf8(std::string_view bytes) {
  DecodeResult out;
  out.text.reserve(bytes.size());
  const std::size_t n = bytes.size();
  std::size_t i = 0;
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
      out.text.push_back(b0);
      ++i;
      continue;
    }

    std::size_t need = 0;
    char32_t cp = 0;
    // Valid range for the second byte narrows for a few lead bytes
    // (overlongs, surrogates, > U+10FFFF).
    unsigned char lo = 0x80, hi = 0xBF;
    if (b0 >= 0xC2 && b0 <= 0xDF) {
      need = 1;
      cp = b0 & 0x1F;
    } else if (b0 >= 0xE0 && b0 <= 0xEF) {
      need = 2;
      cp = b0 & 0x0F;
      if (b0 == 0xE0) lo = 0xA0;
      if (b0 == 0xED) hi = 0x9F;
    } else if (b0 >= 0xF0 && b0 <= 0xF4) {
      need = 3;
      cp = b0 & 0x07;
      if (b0 == 0xF0) lo = 0x90;
      if (b0 == 0xF4) hi = 0x8F;
    } else {
      out.text.push_back(kReplacementChar);
      ++out.replacements;
      ++i;
      continue;
    }

    std::size_t consumed = 1;
    bool ok = true;
    for (std::size_t k = 0; k < need; ++k) {
      if (i + consumed >= n) {
        ok = false;
        break;
      }
      const auto b = static_cast<unsigned char>(bytes[i + consumed]);
      const bool in_range = (k == 0) ? (b >= lo && b <= hi) : is_continuation(b);
      if (!in_range) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
      ++consumed;
    }
    if (ok) {
      out.text.push_back(cp);
    } else {
      out.text.push_back(kReplacementChar);
      ++out.replacements;
    }
    i += consumed;
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacementChar;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::string sanitize_utf8(std::string_view bytes, std::size_t* replacements) {
  auto decoded = decode_utf8(bytes);
  if (replacements) *replacements = decoded.replacements;
  return encode_utf8(decoded.text);
}

}  // namespace stc
