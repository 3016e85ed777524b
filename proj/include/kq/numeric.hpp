#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "kq/error.hpp"

namespace kq {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using i32 = std::int32_t;
using u128 = unsigned __int128;

/// a mod m in [0, m).
inline i64 pmod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// p-adic valuation of a nonzero integer; returns `cap` for zero.
inline int valuation(i64 n, u64 p, int cap = 1 << 20) {
  if (n == 0) return cap;
  if (n < 0) n = -n;
  int v = 0;
  while (static_cast<u64>(n) % p == 0) {
    n /= static_cast<i64>(p);
    ++v;
  }
  return v;
}

/// Largest power of p dividing n, and the cofactor.
inline std::pair<u64, u64> split_part(u64 n, u64 p) {
  u64 pp = 1;
  while (n % p == 0) {
    n /= p;
    pp *= p;
  }
  return {pp, n};
}

inline u64 ipow(u64 b, unsigned e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

inline u64 euler_phi(u64 n) {
  u64 r = n;
  for (u64 q : prime_factors(n)) r = r / q * (q - 1);
  return r;
}

/// Inverse of a modulo m, a coprime to m.
inline u64 invmod(u64 a, u64 m) {
  i64 t = 0, nt = 1;
  i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
  while (nr) {
    i64 q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw DivisibilityError("element not invertible modulo " + std::to_string(m));
  return static_cast<u64>(t < 0 ? t + static_cast<i64>(m) : t);
}

/// Smallest primitive root modulo a prime.
inline u64 primitive_root(u64 ell) {
  auto fs = prime_factors(ell - 1);
  for (u64 g = 2; g < ell; ++g) {
    bool ok = true;
    for (u64 q : fs)
      if (powmod(g, (ell - 1) / q, ell) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return 1;
}

/// Deterministic generator used everywhere a seed is accepted.
class Rng {
 public:
  explicit Rng(u64 seed) : eng_(seed) {}
  u64 next() { return eng_(); }
  u64 below(u64 n) { return n ? eng_() % n : 0; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace kq
