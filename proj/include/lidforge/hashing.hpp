#pragma once

#include <cstdint>
#include <string_view>

namespace lidforge {

// FNV-1a, 32-bit. Used for the char-n-gram hashing trick; must be
// bit-identical across platforms, so the model file format depends on it.
inline std::uint32_t fnv1a32(std::string_view bytes) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

// FNV-1a, 64-bit. Used for run-manifest input digests and seed mixing.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace lidforge
