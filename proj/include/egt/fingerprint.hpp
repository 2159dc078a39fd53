#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace egt {

// FNV-1a, 64-bit. Used for content fingerprints in manifests and trajectory
// metadata; stable across runs and platforms.
inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::string fnv1a64_hex(const void* data, std::size_t size) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(data, size);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace egt
