#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "hslo/error.hpp"

namespace hslo::binary {

// Explicit little-endian encoding, independent of host byte order.

template <class T>
  requires std::is_integral_v<T>
void put(std::string& buf, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<char>(u & 0xffu));
    u = static_cast<U>(u >> 8);
  }
}

inline void put_f64(std::string& buf, double value) {
  put(buf, std::bit_cast<std::uint64_t>(value));
}

template <class T>
  requires std::is_integral_v<T>
T get(const char* p) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) {
    u = static_cast<U>((u << 8) | static_cast<unsigned char>(p[i]));
  }
  return static_cast<T>(u);
}

inline double get_f64(const char* p) { return std::bit_cast<double>(get<std::uint64_t>(p)); }

/// Reads exactly n bytes or throws FormatError naming `what`.
inline std::string read_exact(std::istream& in, std::size_t n, const char* what) {
  std::string buf(n, '\0');
  in.read(buf.data(), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw FormatError(std::string("truncated input while reading ") + what);
  }
  return buf;
}

/// FNV-1a, 64-bit.
inline std::uint64_t fnv1a64(const char* data, std::size_t n,
                             std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (std::size_t i = 0; i < n; ++i) {
    hash ^= static_cast<unsigned char>(data[i]);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace hslo::binary
