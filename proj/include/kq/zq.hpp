#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "kq/cyclotomic.hpp"
#include "kq/error.hpp"
#include "kq/numeric.hpp"

namespace kq {

constexpr int kMaxF = 12;

class ZqRing;

/**
 * Element of Z_q / p^k = (Z/p^k)[x]/(h), q = p^f.
 *
 * Values are small fixed arrays so they can live in big dense matrices;
 * the ring pointer refers to an interned, never-freed ZqRing.
 */
struct ZqElem {
  const ZqRing* ring = nullptr;
  std::array<u64, kMaxF> c{};

  const ZqRing& R() const { return *ring; }
  bool is_zero() const;
  bool is_unit() const;
  int valuation() const;
  ZqElem inverse() const;
  ZqElem pow(u64 e) const;
  ZqElem reduce_to(const ZqRing& S) const;
  std::vector<u64> coeffs() const;
  std::string str() const;
};

class ZqRing {
 public:
  /// Interned ring; h is the Teichmuller lift of the lexicographically least
  /// primitive polynomial of degree f over F_p, so x has order q - 1.
  static const ZqRing& get(u64 p, int f, int k) {
    static std::mutex mu;
    static std::map<std::tuple<u64, int, int>, std::unique_ptr<ZqRing>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p, f, k);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto r = std::unique_ptr<ZqRing>(new ZqRing(p, f, k));
    auto* raw = r.get();
    cache[key] = std::move(r);
    return *raw;
  }

  /// Largest precision with p^k below 2^62.
  static int max_precision(u64 p) {
    int k = 0;
    u128 v = 1;
    while (v * p < (u128(1) << 62)) {
      v *= p;
      ++k;
    }
    return std::min(k, 64);
  }

  u64 p() const { return p_; }
  int f() const { return f_; }
  int k() const { return k_; }
  u64 modulus() const { return mod_; }
  u64 q() const { return q_; }
  const std::vector<u64>& h() const { return h_; }  // monic, h_[f] = 1
  const ZqRing& residue() const { return get(p_, f_, 1); }
  const ZqRing& with_precision(int k) const { return get(p_, f_, k); }

  ZqElem zero() const {
    ZqElem z;
    z.ring = this;
    return z;
  }
  ZqElem from_int(i64 v) const {
    ZqElem z = zero();
    i64 m = static_cast<i64>(mod_);
    i64 r = v % m;
    if (r < 0) r += m;
    z.c[0] = static_cast<u64>(r);
    return z;
  }
  ZqElem one() const { return from_int(1); }
  ZqElem from_mpz(const mpz_class& v) const {
    ZqElem z = zero();
    z.c[0] = mpz_fdiv_ui(v.get_mpz_t(), mod_);
    return z;
  }
  ZqElem from_rational(const mpq_class& q) const {
    const mpz_class& den = q.get_den();
    if (mpz_fdiv_ui(den.get_mpz_t(), p_) == 0) throw NotPIntegral("denominator " + den.get_str() + " is divisible by p=" + std::to_string(p_));
    return mul(from_mpz(q.get_num()), from_mpz(den).inverse());
  }
  ZqElem from_coeffs(const std::vector<u64>& v) const {
    if (static_cast<int>(v.size()) != f_) throw InputError("Z_q element needs f coefficients");
    ZqElem z = zero();
    for (int i = 0; i < f_; ++i) z.c[i] = v[i] % mod_;
    return z;
  }
  /// x mod h: the Teichmuller generator, of multiplicative order q - 1.
  ZqElem generator() const {
    ZqElem z = zero();
    if (f_ == 1) z.c[0] = (mod_ - h_[0]) % mod_;
    else z.c[1] = 1;
    return z;
  }

  /// Teichmuller m-th root of unity t^{(q-1)/m}.
  ZqElem teichmuller_embed(u64 m) const {
    if (m == 0 || (q_ - 1) % m) throw DivisibilityError("m=" + std::to_string(m) + " does not divide q-1=" + std::to_string(q_ - 1));
    return generator().pow((q_ - 1) / m);
  }

  // raw arithmetic
  ZqElem add(const ZqElem& a, const ZqElem& b) const {
    ZqElem z = zero();
    for (int i = 0; i < f_; ++i) {
      u64 s = a.c[i] + b.c[i];
      z.c[i] = s >= mod_ ? s - mod_ : s;
    }
    return z;
  }
  ZqElem sub(const ZqElem& a, const ZqElem& b) const {
    ZqElem z = zero();
    for (int i = 0; i < f_; ++i) z.c[i] = a.c[i] >= b.c[i] ? a.c[i] - b.c[i] : a.c[i] + mod_ - b.c[i];
    return z;
  }
  ZqElem neg(const ZqElem& a) const {
    ZqElem z = zero();
    for (int i = 0; i < f_; ++i) z.c[i] = a.c[i] ? mod_ - a.c[i] : 0;
    return z;
  }
  ZqElem mul(const ZqElem& a, const ZqElem& b) const {
    ZqElem z = zero();
    if (f_ == 1) {
      z.c[0] = mulmod(a.c[0], b.c[0], mod_);
      return z;
    }
    std::array<u128, 2 * kMaxF> t{};
    for (int i = 0; i < f_; ++i) {
      if (!a.c[i]) continue;
      for (int j = 0; j < f_; ++j) t[i + j] = (t[i + j] + (u128)a.c[i] * b.c[j]) % mod_;
    }
    for (int d = 2 * f_ - 2; d >= f_; --d) {
      u64 top = static_cast<u64>(t[d] % mod_);
      if (!top) continue;
      t[d] = 0;
      for (int i = 0; i < f_; ++i) t[d - f_ + i] = (t[d - f_ + i] + (u128)(mod_ - h_[i]) * top) % mod_;
    }
    for (int i = 0; i < f_; ++i) z.c[i] = static_cast<u64>(t[i] % mod_);
    return z;
  }

 private:
  friend struct ZqElem;

  ZqRing(u64 p, int f, int k) : p_(p), f_(f), k_(k) {
    if (!is_prime(p)) throw InputError("p must be prime");
    if (f < 1 || f > kMaxF) throw InputError("residue degree f must be in 1.." + std::to_string(kMaxF));
    if (k < 1 || k > max_precision(p)) throw InputError("precision k out of range for p=" + std::to_string(p));
    mod_ = ipow(p, k);
    q_ = ipow(p, f);
    auto hbar = least_primitive(p, f);
    if (k == 1) {
      h_ = hbar;
      return;
    }
    // Hensel: in (Z/p^k)[x]/(hbar lifted), t = x^{q^{k-1}} is Teichmuller;
    // h = prod_i (X - t^{p^i}).
    ZqRing tmp(p, f, k, hbar);
    ZqElem t = tmp.generator();
    for (int i = 1; i < k; ++i) t = t.pow(q_);
    std::vector<ZqElem> poly{tmp.one()};
    ZqElem root = t;
    for (int i = 0; i < f; ++i) {
      std::vector<ZqElem> np(poly.size() + 1, tmp.zero());
      for (size_t j = 0; j < poly.size(); ++j) {
        np[j + 1] = tmp.add(np[j + 1], poly[j]);
        np[j] = tmp.sub(np[j], tmp.mul(poly[j], root));
      }
      poly = np;
      root = root.pow(p);
    }
    h_.assign(f + 1, 0);
    for (int i = 0; i <= f; ++i) {
      for (int j = 1; j < f; ++j)
        if (poly[i].c[j]) throw InvariantViolation("Teichmuller lift produced a non-scalar coefficient");
      h_[i] = poly[i].c[0];
    }
  }

  ZqRing(u64 p, int f, int k, std::vector<u64> h) : p_(p), f_(f), k_(k), h_(std::move(h)) {
    mod_ = ipow(p, k);
    q_ = ipow(p, f);
  }

  // --- F_p polynomial helpers, lowest degree first
  using Poly = std::vector<u64>;
  static void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  static Poly pmulmod(const Poly& a, const Poly& b, const Poly& m, u64 p) {
    Poly r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return pmod(r, m, p);
  }
  static Poly pmod(Poly a, const Poly& m, u64 p) {
    trim(a);
    int dm = static_cast<int>(m.size()) - 1;
    u64 inv = invmod(m.back(), p);
    while (static_cast<int>(a.size()) - 1 >= dm && !a.empty()) {
      int d = static_cast<int>(a.size()) - 1;
      u64 c = a.back() * inv % p;
      for (int i = 0; i <= dm; ++i) a[d - dm + i] = (a[d - dm + i] + (p - c) * m[i]) % p;
      trim(a);
    }
    return a;
  }
  static Poly pgcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
      Poly r = pmod(a, b, p);
      a = b;
      b = r;
    }
    return a;
  }
  static Poly ppow(Poly base, u64 e, const Poly& m, u64 p) {
    Poly r{1};
    base = pmod(base, m, p);
    while (e) {
      if (e & 1) r = pmulmod(r, base, m, p);
      base = pmulmod(base, base, m, p);
      e >>= 1;
    }
    return r;
  }
  static Poly least_primitive(u64 p, int f) {
    u64 q = ipow(p, f);
    auto qf = prime_factors(q - 1);
    for (u64 N = 0; N < q; ++N) {
      Poly h(f + 1, 0);
      u64 t = N;
      for (int i = 0; i < f; ++i) {
        h[i] = t % p;
        t /= p;
      }
      h[f] = 1;
      if (h[0] == 0 && f > 1) continue;
      bool irreducible = true;
      for (int i = 1; i <= f / 2 && irreducible; ++i) {
        Poly xp = ppow(Poly{0, 1}, ipow(p, i), h, p);
        xp.resize(std::max<size_t>(xp.size(), 2), 0);
        xp[1] = (xp[1] + p - 1) % p;
        Poly g = pgcd(h, xp, p);
        if (g.size() > 1) irreducible = false;
      }
      if (!irreducible) continue;
      Poly x{0, 1};
      if (f == 1) {
        // x = -h0 mod p must have order p - 1
        x = Poly{(p - h[0]) % p};
        if (x[0] == 0) continue;
      }
      bool primitive = true;
      for (u64 r : qf) {
        Poly v = ppow(x, (q - 1) / r, h, p);
        if (v.size() == 1 && v[0] == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) return h;
    }
    throw InvariantViolation("no primitive polynomial found");
  }

  u64 p_;
  int f_, k_;
  u64 mod_ = 0, q_ = 0;
  std::vector<u64> h_;
};

inline ZqElem operator+(const ZqElem& a, const ZqElem& b) { return a.ring->add(a, b); }
inline ZqElem operator-(const ZqElem& a, const ZqElem& b) { return a.ring->sub(a, b); }
inline ZqElem operator-(const ZqElem& a) { return a.ring->neg(a); }
inline ZqElem operator*(const ZqElem& a, const ZqElem& b) { return a.ring->mul(a, b); }
inline ZqElem& operator+=(ZqElem& a, const ZqElem& b) { return a = a + b; }
inline ZqElem& operator-=(ZqElem& a, const ZqElem& b) { return a = a - b; }
inline ZqElem& operator*=(ZqElem& a, const ZqElem& b) { return a = a * b; }
inline bool operator==(const ZqElem& a, const ZqElem& b) {
  for (int i = 0; i < a.ring->f(); ++i)
    if (a.c[i] != b.c[i]) return false;
  return true;
}
inline bool operator!=(const ZqElem& a, const ZqElem& b) { return !(a == b); }
/// Total order on coefficient arrays, used for canonical sorting only.
inline bool operator<(const ZqElem& a, const ZqElem& b) {
  for (int i = a.ring->f() - 1; i >= 0; --i)
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  return false;
}

inline bool ZqElem::is_zero() const {
  for (int i = 0; i < ring->f(); ++i)
    if (c[i]) return false;
  return true;
}
inline bool ZqElem::is_unit() const {
  for (int i = 0; i < ring->f(); ++i)
    if (c[i] % ring->p()) return true;
  return false;
}
inline int ZqElem::valuation() const {
  int v = ring->k();
  for (int i = 0; i < ring->f(); ++i)
    if (c[i]) v = std::min(v, kq::valuation(static_cast<i64>(c[i]), ring->p()));
  return v;
}
inline ZqElem ZqElem::pow(u64 e) const {
  ZqElem r = ring->one(), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}
inline ZqElem ZqElem::inverse() const {
  if (!is_unit()) throw DivisibilityError("element of Z_q is not a unit");
  // Fermat in the residue field, then Newton y <- y(2 - a y)
  ZqElem y = pow(ring->q() - 2);
  ZqElem two = ring->from_int(2);
  for (int prec = 1; prec < ring->k(); prec *= 2) y = y * (two - (*this) * y);
  return y;
}
inline ZqElem ZqElem::reduce_to(const ZqRing& S) const {
  if (S.p() != ring->p() || S.f() != ring->f() || S.k() > ring->k()) throw InputError("incompatible Z_q reduction");
  ZqElem z = S.zero();
  for (int i = 0; i < S.f(); ++i) z.c[i] = c[i] % S.modulus();
  return z;
}
inline std::vector<u64> ZqElem::coeffs() const { return std::vector<u64>(c.begin(), c.begin() + ring->f()); }
inline std::string ZqElem::str() const {
  std::string s = "[";
  for (int i = 0; i < ring->f(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + "]";
}

/// Runs fn(k), doubling k on PrecisionExhausted up to the cap for p.
template <class Fn>
auto with_precision_retry(u64 p, int k, Fn&& fn) {
  const int cap = ZqRing::max_precision(p);
  k = std::min(k, cap);
  while (true) {
    try {
      return fn(k);
    } catch (const PrecisionExhausted&) {
      if (k >= cap) throw;
      k = std::min(2 * k, cap);
    }
  }
}

/// Smallest f with m | p^f - 1 (m coprime to p).
inline int auto_q_exponent(u64 p, u64 m) {
  if (m <= 1) return 1;
  if (std::gcd(p, m) != 1) throw DivisibilityError("m must be coprime to p");
  u64 v = p % m;
  int f = 1;
  while (v != 1 % m) {
    v = v * p % m;
    ++f;
  }
  return f;
}

/// Image of a cyclotomic number under zeta_m -> t^{(q-1)/m}.  The value
/// must lie in Q(zeta_m) with m the prime-to-p part of its conductor.
inline ZqElem embed_cyc_to_zq(const CycNum& a, const ZqRing& R) {
  auto [pp, m] = split_part(static_cast<u64>(a.conductor()), R.p());
  CycNum b = pp == 1 ? a : descend(a, static_cast<int>(m));
  if ((R.q() - 1) % m) throw DivisibilityError("Z_q does not contain the " + std::to_string(m) + "-th roots of unity");
  ZqElem tau = R.teichmuller_embed(m), pw = R.one(), out = R.zero();
  for (const auto& cf : b.coeffs()) {
    if (cf != 0) out += R.from_rational(cf) * pw;
    pw = pw * tau;
  }
  return out;
}

/// Reduction of a p-integral element of Q(zeta_n) to the residue field:
/// p-power roots of unity go to 1, zeta_m to the Teichmuller residue.
inline ZqElem reduce_mod_p(const CycNum& a, const ZqRing& R) {
  const ZqRing& F = R.residue();
  u64 n = static_cast<u64>(a.conductor());
  auto [pa, m] = split_part(n, F.p());
  if ((F.q() - 1) % m) throw DivisibilityError("residue field does not contain the " + std::to_string(m) + "-th roots of unity");
  u64 u = m == 1 ? 0 : invmod(pa % m, m);  // zeta_n = zeta_m^u * zeta_{p^a}^v
  ZqElem w = F.teichmuller_embed(m), out = F.zero();
  for (size_t j = 0; j < a.coeffs().size(); ++j) {
    const auto& cf = a.coeffs()[j];
    if (cf == 0) continue;
    out += F.from_rational(cf) * w.pow(m == 1 ? 0 : (u * j) % m);
  }
  return out;
}

}  // namespace kq
