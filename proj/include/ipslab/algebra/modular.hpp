#pragma once

#include <cstdint>

namespace ipslab::mod {

inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const std::uint64_t s = a + b;
  return (s >= p || s < a) ? s - p : s;
}

inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}

/// Inverse of a nonzero residue modulo a prime.
inline std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
  // extended Euclid on signed 128-bit to avoid the exponentiation cost
  __int128 t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    const __int128 tmp_t = t - q * new_t;
    t = new_t;
    new_t = tmp_t;
    const __int128 tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (t < 0) t += p;
  return static_cast<std::uint64_t>(t);
}

}  // namespace ipslab::mod
