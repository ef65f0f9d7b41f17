#pragma once

// UTF-8 codec and canonical normalization (NFC, UAX #15). Table-driven from
// generated UCD data; Hangul syllables are handled algorithmically.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lidforge/detail/unicode_data.hpp"
#include "lidforge/errors.hpp"

namespace lidforge {

namespace detail {

inline std::uint8_t combining_class(char32_t cp) {
  auto it = std::lower_bound(
      std::begin(kCombiningClasses), std::end(kCombiningClasses), cp,
      [](const CombiningClass& e, char32_t v) { return e.cp < v; });
  if (it != std::end(kCombiningClasses) && it->cp == cp) return it->ccc;
  return 0;
}

inline const Decomposition* find_decomposition(char32_t cp) {
  auto it = std::lower_bound(
      std::begin(kDecompositions), std::end(kDecompositions), cp,
      [](const Decomposition& e, char32_t v) { return e.cp < v; });
  if (it != std::end(kDecompositions) && it->cp == cp) return &*it;
  return nullptr;
}

inline char32_t compose_pair(char32_t first, char32_t second) {
  auto key_less = [](const Composition& e, std::uint64_t key) {
    return (static_cast<std::uint64_t>(e.first) << 32 | e.second) < key;
  };
  std::uint64_t key = static_cast<std::uint64_t>(first) << 32 | second;
  auto it = std::lower_bound(std::begin(kCompositions), std::end(kCompositions),
                             key, key_less);
  if (it != std::end(kCompositions) && it->first == first && it->second == second)
    return it->composed;
  return 0;
}

// Hangul syllable constants (UAX #15 section 3.12).
inline constexpr char32_t kHangulSBase = 0xAC00;
inline constexpr char32_t kHangulLBase = 0x1100;
inline constexpr char32_t kHangulVBase = 0x1161;
inline constexpr char32_t kHangulTBase = 0x11A7;
inline constexpr int kHangulLCount = 19;
inline constexpr int kHangulVCount = 21;
inline constexpr int kHangulTCount = 28;
inline constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
inline constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

inline void decompose_into(char32_t cp, std::u32string& out) {
  if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
    int s = static_cast<int>(cp - kHangulSBase);
    out.push_back(kHangulLBase + s / kHangulNCount);
    out.push_back(kHangulVBase + (s % kHangulNCount) / kHangulTCount);
    if (s % kHangulTCount != 0) out.push_back(kHangulTBase + s % kHangulTCount);
    return;
  }
  if (const Decomposition* d = find_decomposition(cp)) {
    decompose_into(d->first, out);
    if (d->second != 0) decompose_into(d->second, out);
    return;
  }
  out.push_back(cp);
}

inline char32_t compose_hangul(char32_t a, char32_t b) {
  if (a >= kHangulLBase && a < kHangulLBase + kHangulLCount &&
      b >= kHangulVBase && b < kHangulVBase + kHangulVCount) {
    int l = static_cast<int>(a - kHangulLBase);
    int v = static_cast<int>(b - kHangulVBase);
    return kHangulSBase + (l * kHangulVCount + v) * kHangulTCount;
  }
  if (a >= kHangulSBase && a < kHangulSBase + kHangulSCount &&
      (a - kHangulSBase) % kHangulTCount == 0 && b > kHangulTBase &&
      b < kHangulTBase + kHangulTCount) {
    return a + (b - kHangulTBase);
  }
  return 0;
}

}  // namespace detail

// Decodes UTF-8, rejecting overlong forms, surrogates, and values past
// U+10FFFF.
inline std::u32string utf8_decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  auto fail = [&] { throw InvalidEncoding("invalid UTF-8 at byte offset " +
                                          std::to_string(i)); };
  while (i < bytes.size()) {
    unsigned char b0 = static_cast<unsigned char>(bytes[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      fail();
    }
    if (i + len > bytes.size()) fail();
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char bk = static_cast<unsigned char>(bytes[i + k]);
      if ((bk & 0xC0) != 0x80) fail();
      cp = (cp << 6) | (bk & 0x3F);
    }
    static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMinByLen[len]) fail();            // overlong
    if (cp >= 0xD800 && cp <= 0xDFFF) fail();              // surrogate
    if (cp > 0x10FFFF) fail();
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void utf8_encode_to(char32_t cp, std::string& out) {
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

inline std::string utf8_encode(const std::u32string& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) utf8_encode_to(cp, out);
  return out;
}

// Canonical composition over code points: full decomposition, canonical
// ordering, then pairwise recomposition.
inline std::u32string nfc(const std::u32string& input) {
  std::u32string decomposed;
  decomposed.reserve(input.size());
  for (char32_t cp : input) detail::decompose_into(cp, decomposed);

  // Canonical ordering: stable sort each run of nonzero-ccc marks.
  std::size_t i = 0;
  while (i < decomposed.size()) {
    if (detail::combining_class(decomposed[i]) == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < decomposed.size() && detail::combining_class(decomposed[j]) != 0)
      ++j;
    std::stable_sort(decomposed.begin() + static_cast<std::ptrdiff_t>(i),
                     decomposed.begin() + static_cast<std::ptrdiff_t>(j),
                     [](char32_t a, char32_t b) {
                       return detail::combining_class(a) <
                              detail::combining_class(b);
                     });
    i = j;
  }

  std::u32string out;
  out.reserve(decomposed.size());
  std::ptrdiff_t last_starter = -1;
  for (char32_t cp : decomposed) {
    std::uint8_t ccc = detail::combining_class(cp);
    if (last_starter >= 0) {
      bool blocked =
          static_cast<std::ptrdiff_t>(out.size()) - 1 > last_starter &&
          detail::combining_class(out.back()) >= ccc;
      if (!blocked) {
        char32_t starter = out[static_cast<std::size_t>(last_starter)];
        char32_t composed = detail::compose_hangul(starter, cp);
        if (composed == 0) composed = detail::compose_pair(starter, cp);
        if (composed != 0) {
          out[static_cast<std::size_t>(last_starter)] = composed;
          continue;
        }
      }
    }
    if (ccc == 0) last_starter = static_cast<std::ptrdiff_t>(out.size());
    out.push_back(cp);
  }
  return out;
}

inline std::string nfc_utf8(std::string_view utf8) {
  return utf8_encode(nfc(utf8_decode(utf8)));
}

// White_Space property (PropList.txt).
inline bool is_whitespace(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
    case 0x20: case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// General category Cc.
inline bool is_control(char32_t cp) {
  return cp < 0x20 || (cp >= 0x7F && cp <= 0x9F);
}

}  // namespace lidforge
