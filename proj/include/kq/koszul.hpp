#pragma once

#include <gmpxx.h>

#include <numeric>
#include <optional>
#include <vector>

#include "kq/cyclotomic.hpp"
#include "kq/error.hpp"
#include "kq/group.hpp"
#include "kq/numeric.hpp"

namespace kq {

/// Representative of x in Q/Z inside [0, 1).
inline mpq_class mod1(const mpq_class& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  mpq_class r = x - mpq_class(f);
  r.canonicalize();
  return r;
}

/**
 * Finite abelian group Z/d_1 x ... x Z/d_r, elements encoded in mixed radix
 * with the first factor least significant.
 */
class FinAbGroup {
 public:
  FinAbGroup() = default;
  explicit FinAbGroup(std::vector<int> factors) : d_(std::move(factors)) {
    for (int d : d_)
      if (d < 1) throw InputError("cyclic factor orders must be positive");
    n_ = 1;
    for (int d : d_) n_ *= d;
  }
  int order() const { return n_; }
  const std::vector<int>& factors() const { return d_; }
  int rank() const { return static_cast<int>(d_.size()); }

  std::vector<int> decode(int x) const {
    std::vector<int> v(d_.size());
    for (size_t i = 0; i < d_.size(); ++i) {
      v[i] = x % d_[i];
      x /= d_[i];
    }
    return v;
  }
  int encode(const std::vector<int>& v) const {
    int x = 0;
    for (size_t i = d_.size(); i-- > 0;) x = x * d_[i] + ((v[i] % d_[i]) + d_[i]) % d_[i];
    return x;
  }
  int add(int a, int b) const {
    auto u = decode(a), v = decode(b);
    for (size_t i = 0; i < u.size(); ++i) u[i] += v[i];
    return encode(u);
  }
  int neg(int a) const {
    auto u = decode(a);
    for (auto& x : u) x = -x;
    return encode(u);
  }
  int exponent() const {
    int e = 1;
    for (int d : d_) e = std::lcm(e, d);
    return e;
  }
  /// Pairing with the dual: phi = (a_i) sends g to sum a_i g_i / d_i.
  mpq_class pair(int phi, int g) const {
    auto a = decode(phi), x = decode(g);
    mpq_class s = 0;
    for (size_t i = 0; i < d_.size(); ++i) {
      mpq_class t(static_cast<long>(a[i]) * x[i], d_[i]);
      t.canonicalize();
      s += t;
    }
    return mod1(s);
  }
  int embed_factor(int i, int value) const {
    std::vector<int> v(d_.size(), 0);
    v[i] = value;
    return encode(v);
  }

  /// G x H with the factors of G first.
  static FinAbGroup product(const FinAbGroup& a, const FinAbGroup& b) {
    std::vector<int> f = a.d_;
    f.insert(f.end(), b.d_.begin(), b.d_.end());
    return FinAbGroup(f);
  }
  /// (x, y) in a x b as an element of product(a, b).
  static int pack(const FinAbGroup& a, const FinAbGroup&, int x, int y) { return x + a.order() * y; }

 private:
  std::vector<int> d_;
  int n_ = 1;
};

/// Invariant factors d_1 | d_2 | ... of an abelian table group.
inline FinAbGroup abelian_invariants(const FiniteGroup& G) {
  if (!G.is_abelian()) throw NotAbelian(G.name() + " is not abelian");
  std::vector<std::vector<int>> per_prime;  // prime-power factor sizes, descending
  for (u64 p : prime_factors(static_cast<u64>(G.order()))) {
    std::vector<int> counts{1};
    for (u64 pj = p;; pj *= p) {
      int c = 0;
      for (int g = 0; g < G.order(); ++g)
        if (static_cast<u64>(G.element_order(g)) <= pj && pj % G.element_order(g) == 0) ++c;
      counts.push_back(c);
      if (c == counts[counts.size() - 2]) break;
    }
    // number of cyclic factors of order >= p^j is log_p(counts[j]/counts[j-1])
    std::vector<int> ge;
    for (size_t j = 1; j < counts.size(); ++j) {
      int ratio = counts[j] / counts[j - 1], r = 0;
      while (ratio > 1) {
        ratio /= static_cast<int>(p);
        ++r;
      }
      ge.push_back(r);
    }
    std::vector<int> sizes;
    for (size_t j = 0; j < ge.size(); ++j) {
      int next = j + 1 < ge.size() ? ge[j + 1] : 0;
      for (int t = 0; t < ge[j] - next; ++t) sizes.push_back(static_cast<int>(ipow(p, static_cast<unsigned>(j + 1))));
    }
    std::sort(sizes.rbegin(), sizes.rend());
    per_prime.push_back(sizes);
  }
  size_t r = 0;
  for (auto& s : per_prime) r = std::max(r, s.size());
  std::vector<int> d(r, 1);
  for (auto& s : per_prime)
    for (size_t i = 0; i < s.size(); ++i) d[r - 1 - i] *= s[i];
  std::vector<int> out;
  for (int x : d)
    if (x > 1) out.push_back(x);
  return FinAbGroup(out);
}

/// Q/Z-valued 2-cochain on an abelian group: entry (a, b) is num[a * |A| + b] / den
/// with 0 <= num < den.
struct Cocycle2 {
  FinAbGroup A;
  i64 den = 1;
  std::vector<i64> num;
  i64 at(int a, int b) const { return num[static_cast<size_t>(a) * A.order() + b]; }
  mpq_class operator()(int a, int b) const { return frac(at(a, b), den); }
};

inline Cocycle2 zero_cochain(const FinAbGroup& A, i64 den = 1) {
  return Cocycle2{A, den, std::vector<i64>(static_cast<size_t>(A.order()) * A.order(), 0)};
}

/// P[phi * |G| + g] = phi(g) * exp(G), an integer in [0, exp(G)).
inline std::vector<i64> pair_table(const FinAbGroup& G) {
  const int n = G.order();
  const i64 e = G.exponent();
  std::vector<i64> P(static_cast<size_t>(n) * n);
  for (int phi = 0; phi < n; ++phi)
    for (int g = 0; g < n; ++g) {
      mpq_class v = G.pair(phi, g) * e;
      P[static_cast<size_t>(phi) * n + g] = v.get_num().get_si();
    }
  return P;
}

/// E((g, phi), (h, psi)) = phi(h) on G x G^dual.
inline Cocycle2 standard_cocycle(const FinAbGroup& G) {
  FinAbGroup A = FinAbGroup::product(G, G);
  const int n = G.order(), N = A.order();
  Cocycle2 c = zero_cochain(A, G.exponent());
  auto P = pair_table(G);
  for (int g = 0; g < n; ++g)
    for (int phi = 0; phi < n; ++phi)
      for (int h = 0; h < n; ++h)
        for (int psi = 0; psi < n; ++psi)
          c.num[static_cast<size_t>(FinAbGroup::pack(G, G, g, phi)) * N + FinAbGroup::pack(G, G, h, psi)] =
              P[static_cast<size_t>(phi) * n + h];
  return c;
}

/// a + b for all pairs, index a * |A| + b.
inline std::vector<int> addition_table(const FinAbGroup& A) {
  const int n = A.order();
  std::vector<int> add(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) add[static_cast<size_t>(a) * n + b] = A.add(a, b);
  return add;
}

/// (d nu)(a, b) = nu(b) - nu(a + b) + nu(a).
inline Cocycle2 coboundary(const FinAbGroup& A, const std::vector<mpq_class>& nu) {
  const int n = A.order();
  mpz_class D = 1;
  for (auto& v : nu) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), v.get_den().get_mpz_t());
  if (!D.fits_slong_p()) throw InputError("cochain denominators are too large");
  const i64 d = D.get_si();
  std::vector<i64> m(n);
  for (int a = 0; a < n; ++a) {
    mpq_class v = mod1(nu[a]) * D;
    m[a] = v.get_num().get_si();
  }
  Cocycle2 c = zero_cochain(A, d);
  auto add = addition_table(A);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      size_t i = static_cast<size_t>(a) * n + b;
      c.num[i] = pmod(m[b] - m[add[i]] + m[a], d);
    }
  return c;
}

/// The same class of cochain written over the denominator D, a multiple of c.den.
inline Cocycle2 rescale(const Cocycle2& c, i64 D) {
  if (D % c.den) throw InputError("new denominator must be a multiple of the old one");
  Cocycle2 r{c.A, D, c.num};
  for (auto& v : r.num) v *= D / c.den;
  return r;
}

struct CocycleCheck {
  bool ok = true;
  int a = -1, b = -1, x = -1;  // failing triple
};

/// c(b,x) - c(a+b,x) + c(a,b+x) - c(a,b) = 0 for all triples.
inline CocycleCheck is_cocycle(const Cocycle2& c) {
  const FinAbGroup& A = c.A;
  const int n = A.order();
  if (c.den > (1 << 28)) throw InputError("cocycle denominators are too large");
  std::vector<i32> num(c.num.size());
  for (size_t i = 0; i < num.size(); ++i) num[i] = static_cast<i32>(pmod(c.num[i], c.den));
  auto add = addition_table(A);
  // entries lie in [0, den), so the alternating sum lies in (-2 den, 2 den)
  const i32 di = static_cast<i32>(c.den);
  for (int a = 0; a < n; ++a) {
    const i32* ra = &num[static_cast<size_t>(a) * n];
    for (int b = 0; b < n; ++b) {
      const int ab = add[static_cast<size_t>(a) * n + b];
      const i32* rb = &num[static_cast<size_t>(b) * n];
      const i32* rab = &num[static_cast<size_t>(ab) * n];
      const int* addb = &add[static_cast<size_t>(b) * n];
      const i32 cab = ra[b];
      for (int x = 0; x < n; ++x) {
        i32 v = rb[x] - rab[x] + ra[addb[x]] - cab;
        if (v != 0 && v != di && v != -di) return {false, a, b, x};
      }
    }
  }
  return {};
}

/// Order of the alternating form c(a,b) - c(b,a).
inline int class_order(const Cocycle2& c) {
  const int n = c.A.order();
  i64 g = c.den;
  for (int a = 0; a < n && g > 1; ++a)
    for (int b = a + 1; b < n; ++b) g = std::gcd(g, pmod(c.at(a, b) - c.at(b, a), c.den));
  return static_cast<int>(c.den / g);
}

/**
 * A 1-cochain nu with d nu = c, or nothing.  The central extension defined by
 * c is split over each cyclic factor by an element x_i with x_i^{d_i} = 1;
 * nu is minus the first coordinate of the resulting section, and d nu = c is
 * verified exactly.
 */
inline std::optional<std::vector<mpq_class>> coboundary_witness(const Cocycle2& c) {
  const FinAbGroup& A = c.A;
  struct Ext {
    mpq_class t;
    int a;
  };
  auto mul = [&](const Ext& x, const Ext& y) { return Ext{mod1(x.t + y.t + c(x.a, y.a)), A.add(x.a, y.a)}; };
  Ext one{mod1(-c(0, 0)), 0};
  std::vector<Ext> gens;
  for (int i = 0; i < A.rank(); ++i) {
    int e = A.embed_factor(i, 1);
    int d = A.factors()[i];
    mpq_class s = 0;
    for (int j = 1; j < d; ++j) s += c(A.embed_factor(i, j), e);
    mpq_class t = (one.t - s) / mpq_class(d);
    gens.push_back({mod1(t), e});
  }
  // walk each generator's powers once, in mixed-radix order
  std::vector<mpq_class> nu(A.order());
  std::vector<Ext> sec(A.order(), one);
  for (int g = 1; g < A.order(); ++g) {
    auto v = A.decode(g);
    size_t i = 0;
    while (v[i] == 0) ++i;
    v[i] -= 1;
    Ext s = mul(sec[A.encode(v)], gens[i]);
    if (s.a != g) throw InvariantViolation("section lands on the wrong element");
    sec[g] = s;
  }
  for (int g = 0; g < A.order(); ++g) nu[g] = mod1(-sec[g].t);
  Cocycle2 d = coboundary(A, nu);
  i64 D = std::lcm(d.den, c.den);
  Cocycle2 dd = rescale(d, D), cc = rescale(c, D);
  for (size_t i = 0; i < dd.num.size(); ++i)
    if (pmod(dd.num[i] - cc.num[i], D)) return std::nullopt;
  return nu;
}

/// E'((phi, g, psi), (chi, h, omega)) = chi(g) + psi(h) on G^dual x G x G^dual.
inline mpq_class double_cocycle_value(const FinAbGroup& G, int phi, int g, int psi, int chi, int h, int omega) {
  (void)phi;
  (void)omega;
  return mod1(G.pair(chi, g) + G.pair(psi, h));
}

/// The full E' as a table on G^dual x G x G^dual (small G only).
inline Cocycle2 double_cocycle(const FinAbGroup& G) {
  FinAbGroup A = FinAbGroup::product(FinAbGroup::product(G, G), G);
  const int n = G.order(), N = A.order();
  const i64 e = G.exponent();
  Cocycle2 c = zero_cochain(A, e);
  auto P = pair_table(G);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      int g = (a / n) % n, psi = a / (n * n), chi = b % n, h = (b / n) % n;
      c.num[static_cast<size_t>(a) * N + b] =
          (P[static_cast<size_t>(chi) * n + g] + P[static_cast<size_t>(psi) * n + h]) % e;
    }
  return c;
}

/// E' pulled back along G^dual x G -> G^dual x G x G^dual, (phi, g) -> (phi, g, phi).
inline Cocycle2 diagonal_restricted_cocycle(const FinAbGroup& G) {
  FinAbGroup A = FinAbGroup::product(G, G);  // (phi, g)
  const int n = G.order(), N = A.order();
  const i64 e = G.exponent();
  Cocycle2 c = zero_cochain(A, e);
  auto P = pair_table(G);
  for (int phi = 0; phi < n; ++phi)
    for (int g = 0; g < n; ++g)
      for (int omega = 0; omega < n; ++omega)
        for (int h = 0; h < n; ++h)
          c.num[static_cast<size_t>(FinAbGroup::pack(G, G, phi, g)) * N + FinAbGroup::pack(G, G, omega, h)] =
              (P[static_cast<size_t>(omega) * n + g] + P[static_cast<size_t>(phi) * n + h]) % e;
  return c;
}

}  // namespace kq
