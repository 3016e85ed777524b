#pragma once

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "kq/error.hpp"
#include "kq/group.hpp"
#include "kq/linalg.hpp"
#include "kq/numeric.hpp"

namespace kq {

/// b_i * b_j contributes v * b_k.
struct SCEntry {
  int j;
  int k;
  ZqElem v;
};

/**
 * Associative unital algebra, free of finite rank over Z_q/p^k, given by
 * sparse structure constants.  Small algebras are checked on construction.
 */
class FinAlgebra {
 public:
  FinAlgebra() = default;
  FinAlgebra(const ZqRing& R, int rank, std::vector<std::vector<SCEntry>> rows, Vec unit, bool check = true)
      : R_(&R), r_(rank), rows_(std::move(rows)), unit_(std::move(unit)) {
    if (static_cast<int>(rows_.size()) != r_ || static_cast<int>(unit_.size()) != r_)
      throw InputError("structure constants have the wrong shape");
    if (check) verify();
  }

  const ZqRing& ring() const { return *R_; }
  int rank() const { return r_; }
  const Vec& unit() const { return unit_; }
  const std::vector<std::vector<SCEntry>>& rows() const { return rows_; }
  Vec basis(int i) const {
    Vec v = zero_vec(*R_, r_);
    v[i] = R_->one();
    return v;
  }
  Vec zero() const { return zero_vec(*R_, r_); }
  size_t nnz() const {
    size_t s = 0;
    for (auto& r : rows_) s += r.size();
    return s;
  }

  Vec mul(const Vec& a, const Vec& b) const {
    Vec out = zero();
    for (int i = 0; i < r_; ++i) {
      if (a[i].is_zero()) continue;
      for (const auto& e : rows_[i]) {
        if (b[e.j].is_zero()) continue;
        out[e.k] += a[i] * b[e.j] * e.v;
      }
    }
    return out;
  }

  Vec pow(Vec a, u64 e) const {
    Vec r = unit_;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  /// Column j is a * b_j.
  Mat left_matrix(const Vec& a) const {
    Mat M(*R_, r_, r_);
    for (int i = 0; i < r_; ++i) {
      if (a[i].is_zero()) continue;
      for (const auto& e : rows_[i]) M(e.k, e.j) += a[i] * e.v;
    }
    return M;
  }
  /// Column i is b_i * a.
  Mat right_matrix(const Vec& a) const {
    Mat M(*R_, r_, r_);
    for (int i = 0; i < r_; ++i)
      for (const auto& e : rows_[i]) {
        if (a[e.j].is_zero()) continue;
        M(e.k, i) += a[e.j] * e.v;
      }
    return M;
  }

  FinAlgebra reduced(const ZqRing& S) const {
    std::vector<std::vector<SCEntry>> rows(r_);
    for (int i = 0; i < r_; ++i)
      for (const auto& e : rows_[i]) {
        ZqElem v = e.v.reduce_to(S);
        if (!v.is_zero()) rows[i].push_back({e.j, e.k, v});
      }
    return FinAlgebra(S, r_, std::move(rows), reduce_vec(unit_, S), false);
  }

  bool is_idempotent(const Vec& e) const { return mul(e, e) == e; }

 private:
  void verify() const {
    for (int i = 0; i < r_; ++i) {
      Vec b = basis(i);
      if (mul(unit_, b) != b || mul(b, unit_) != b) throw InputError("unit vector is not a two-sided unit");
    }
    auto triple = [&](int i, int j, int k) {
      Vec a = basis(i), b = basis(j), c = basis(k);
      if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw InputError("structure constants are not associative");
    };
    if (r_ <= 40) {
      for (int i = 0; i < r_; ++i)
        for (int j = 0; j < r_; ++j)
          for (int k = 0; k < r_; ++k) triple(i, j, k);
    } else {
      Rng rng(7);
      for (int t = 0; t < 300; ++t)
        triple(static_cast<int>(rng.below(r_)), static_cast<int>(rng.below(r_)), static_cast<int>(rng.below(r_)));
    }
  }

  const ZqRing* R_ = nullptr;
  int r_ = 0;
  std::vector<std::vector<SCEntry>> rows_;
  Vec unit_;
};

/// Z_q/p^k [G] on the group basis.
inline FinAlgebra group_algebra(const FiniteGroup& G, const ZqRing& R) {
  int n = G.order();
  std::vector<std::vector<SCEntry>> rows(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rows[a].push_back({b, G.mul(a, b), R.one()});
  Vec u = zero_vec(R, n);
  u[0] = R.one();
  return FinAlgebra(R, n, std::move(rows), u);
}

/// Full matrix algebra M_n(Z_q/p^k) on matrix units e_{ij} (index i*n+j).
inline FinAlgebra matrix_algebra(int n, const ZqRing& R) {
  std::vector<std::vector<SCEntry>> rows(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) rows[i * n + j].push_back({j * n + l, i * n + l, R.one()});
  Vec u = zero_vec(R, n * n);
  for (int i = 0; i < n; ++i) u[i * n + i] = R.one();
  return FinAlgebra(R, n * n, std::move(rows), u);
}

/// Algebra over the residue field with basis `basis` (vectors of A closed
/// under products), with structure constants in that basis.  `unit` is given
/// in A coordinates.
inline FinAlgebra subalgebra(const FinAlgebra& A, const std::vector<Vec>& basis, const Vec& unit) {
  const ZqRing& R = A.ring();
  if (R.k() != 1) throw InputError("subalgebra expects an algebra over the residue field");
  int d = static_cast<int>(basis.size());
  SpanBasis S(R, A.rank());
  for (auto& b : basis)
    if (!S.insert(b)) throw InputError("subalgebra basis is dependent");
  std::vector<std::vector<SCEntry>> rows(d);
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t) {
      Vec x = S.coordinates(A.mul(basis[s], basis[t]));
      for (int k = 0; k < d; ++k)
        if (!x[k].is_zero()) rows[s].push_back({t, k, x[k]});
    }
  return FinAlgebra(R, d, std::move(rows), S.coordinates(unit), false);
}

// ------------------------------------------------------------- radical

/**
 * Jacobson radical of an algebra over F_q (k = 1) by the trace criterion
 * for characteristic p: with L viewed over F_p through its regular
 * representation, I_{-1} = L and
 *   I_i = { a in I_{i-1} : g_i(a b) = 0 for all b },
 *   g_i(a) = Tr(A^{p^i}) / p^i mod p   (A an integral lift of the matrix of a),
 * and J(L) = I_l for l = floor(log_p dim_{F_p} L).
 * Returns an F_q-basis of J.
 */
inline std::vector<Vec> radical(const FinAlgebra& L) {
  const ZqRing& F = L.ring();
  if (F.k() != 1) throw InputError("radical expects an algebra over the residue field");
  const u64 p = F.p();
  const int f = F.f(), d = L.rank(), n = d * f;
  auto to_fp = [&](const Vec& y) {
    std::vector<u64> v(n);
    for (int s = 0; s < d; ++s)
      for (int a = 0; a < f; ++a) v[s * f + a] = y[s].c[a];
    return v;
  };
  auto from_fp = [&](const std::vector<u64>& v) {
    Vec y = zero_vec(F, d);
    for (int s = 0; s < d; ++s)
      for (int a = 0; a < f; ++a) y[s].c[a] = v[s * f + a] % p;
    return y;
  };
  std::vector<ZqElem> xpow{F.one()};
  ZqElem gen = F.zero();
  if (f > 1) gen.c[1] = 1;
  for (int a = 1; a < f; ++a) xpow.push_back(xpow.back() * gen);
  auto scale = [&](const ZqElem& c, Vec v) {
    for (auto& x : v) x = x * c;
    return v;
  };
  std::vector<Vec> fp_basis;  // x^a * l_s at index s*f + a
  for (int s = 0; s < d; ++s)
    for (int a = 0; a < f; ++a) fp_basis.push_back(scale(xpow[a], L.basis(s)));

  // integral lift of the F_p regular matrix of y, as n x n
  auto reg = [&](const Vec& y) {
    std::vector<std::vector<u64>> M(n, std::vector<u64>(n));
    for (int t = 0; t < d; ++t) {
      Vec yl = L.mul(y, L.basis(t));
      for (int a = 0; a < f; ++a) {
        auto col = to_fp(scale(xpow[a], yl));
        for (int i = 0; i < n; ++i) M[i][t * f + a] = col[i];
      }
    }
    return M;
  };
  auto trace_power = [&](std::vector<std::vector<u64>> M, int i) {
    u64 mod = ipow(p, i + 1);
    for (auto& r : M)
      for (auto& x : r) x %= mod;
    for (int step = 0; step < i; ++step) {
      // M <- M^p
      auto base = M;
      auto R = M;
      for (u64 e = 1; e < p; ++e) {
        // entries stay below p * n, so row sums fit without reduction
        std::vector<std::vector<u64>> T(n, std::vector<u64>(n, 0));
        for (int r = 0; r < n; ++r) {
          for (int k = 0; k < n; ++k) {
            u64 x = R[r][k];
            if (!x) continue;
            const u64* b = base[k].data();
            u64* t = T[r].data();
            for (int c = 0; c < n; ++c) t[c] += x * b[c];
          }
          for (auto& v : T[r]) v %= mod;
        }
        R = std::move(T);
      }
      M = std::move(R);
    }
    u64 tr = 0;
    for (int r = 0; r < n; ++r) tr = (tr + M[r][r]) % mod;
    u64 pi = ipow(p, i);
    if (tr % pi) throw InvariantViolation("trace criterion: power trace not divisible where expected");
    return (tr / pi) % p;
  };

  std::vector<std::vector<std::vector<u64>>> regB;
  for (int t = 0; t < n; ++t) regB.push_back(reg(fp_basis[t]));

  int levels = 0;
  for (u64 v = p; v <= static_cast<u64>(n); v *= p) ++levels;
  std::vector<std::vector<u64>> I;  // F_p basis of I_{i-1}
  for (int s = 0; s < n; ++s) {
    std::vector<u64> e(n, 0);
    e[s] = 1;
    I.push_back(e);
  }
  for (int i = 0; i <= levels && !I.empty(); ++i) {
    int m = static_cast<int>(I.size());
    ModMat Gt(n, std::vector<u64>(m, 0));  // Gt[t][s] = g_i(u_s b_t)
    for (int s = 0; s < m; ++s) {
      std::vector<std::vector<u64>> Mu(n, std::vector<u64>(n, 0));
      for (int b = 0; b < n; ++b)
        if (I[s][b])
          for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) Mu[r][c] = (Mu[r][c] + I[s][b] * regB[b][r][c]) % p;
      for (int t = 0; t < n; ++t) {
        std::vector<std::vector<u64>> P(n, std::vector<u64>(n, 0));
        for (int r = 0; r < n; ++r) {
          for (int k = 0; k < n; ++k) {
            u64 x = Mu[r][k];
            if (!x) continue;
            for (int c = 0; c < n; ++c) P[r][c] += x * regB[t][k][c];
          }
          for (auto& v : P[r]) v %= p;
        }
        Gt[t][s] = trace_power(std::move(P), i);
      }
    }
    auto ker = nullspace_mod_ell(Gt, m, p);
    std::vector<std::vector<u64>> next;
    for (auto& lam : ker) {
      std::vector<u64> v(n, 0);
      for (int s = 0; s < m; ++s)
        if (lam[s])
          for (int c = 0; c < n; ++c) v[c] = (v[c] + lam[s] * I[s][c]) % p;
      next.push_back(v);
    }
    I = std::move(next);
  }
  SpanBasis J(F, d);
  for (auto& v : I) J.insert(from_fp(v));
  return J.vectors();
}

/// Quotient L/J on a complement basis of J (basis vectors of L not in J).
inline FinAlgebra quotient_algebra(const FinAlgebra& L, const std::vector<Vec>& J) {
  const ZqRing& F = L.ring();
  int d = L.rank();
  SpanBasis S(F, d);
  for (auto& v : J) S.insert(v);
  int dj = S.dim();
  std::vector<int> comp;
  for (int i = 0; i < d; ++i)
    if (S.insert(L.basis(i))) comp.push_back(i);
  int r = static_cast<int>(comp.size());
  auto coords = [&](const Vec& y) {
    Vec c = S.coordinates(y);
    return Vec(c.begin() + dj, c.end());
  };
  std::vector<std::vector<SCEntry>> rows(r);
  for (int s = 0; s < r; ++s)
    for (int t = 0; t < r; ++t) {
      Vec c = coords(L.mul(L.basis(comp[s]), L.basis(comp[t])));
      for (int k = 0; k < r; ++k)
        if (!c[k].is_zero()) rows[s].push_back({t, k, c[k]});
    }
  return FinAlgebra(F, r, std::move(rows), coords(L.unit()), false);
}

/// Local iff L/J is commutative with one-dimensional Frobenius-fixed space.
inline bool is_local(const FinAlgebra& L, const std::vector<Vec>& J) {
  FinAlgebra Q = quotient_algebra(L, J);
  int r = Q.rank();
  if (r == 0) return false;
  for (int s = 0; s < r; ++s)
    for (int t = 0; t < s; ++t)
      if (Q.mul(Q.basis(s), Q.basis(t)) != Q.mul(Q.basis(t), Q.basis(s))) return false;
  const ZqRing& F = Q.ring();
  Mat Phi(F, r, r);
  for (int s = 0; s < r; ++s) {
    Vec y = Q.pow(Q.basis(s), F.q());
    for (int i = 0; i < r; ++i) Phi(i, s) = y[i] - (i == s ? F.one() : F.zero());
  }
  return r - rref(Phi).rank() == 1;
}

// ------------------------------------------------- F_q polynomial helpers

namespace detail {

using FqPoly = std::vector<ZqElem>;  // lowest degree first

inline void trim(FqPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

inline FqPoly polymod(FqPoly a, const FqPoly& m) {
  trim(a);
  int dm = static_cast<int>(m.size()) - 1;
  ZqElem inv = m.back().inverse();
  while (!a.empty() && static_cast<int>(a.size()) - 1 >= dm) {
    int da = static_cast<int>(a.size()) - 1;
    ZqElem c = a.back() * inv;
    for (int i = 0; i <= dm; ++i) a[da - dm + i] -= c * m[i];
    trim(a);
  }
  return a;
}

inline FqPoly polymulmod(const FqPoly& a, const FqPoly& b, const FqPoly& m, const ZqRing& F) {
  if (a.empty() || b.empty()) return {};
  FqPoly r(a.size() + b.size() - 1, F.zero());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return polymod(r, m);
}

inline FqPoly polypowmod(FqPoly b, u64 e, const FqPoly& m, const ZqRing& F) {
  FqPoly r{F.one()};
  r = polymod(r, m);
  b = polymod(b, m);
  while (e) {
    if (e & 1) r = polymulmod(r, b, m, F);
    b = polymulmod(b, b, m, F);
    e >>= 1;
  }
  return r;
}

inline std::vector<ZqElem> field_elements(const ZqRing& F) {
  std::vector<ZqElem> out;
  u64 q = F.q();
  for (u64 N = 0; N < q; ++N) {
    ZqElem z = F.zero();
    u64 t = N;
    for (int i = 0; i < F.f(); ++i) {
      z.c[i] = t % F.p();
      t /= F.p();
    }
    out.push_back(z);
  }
  return out;
}

/// Primitive idempotents of F_q[X]/(mu) by Berlekamp's subalgebra.
inline std::vector<FqPoly> berlekamp_idempotents(const FqPoly& mu, const ZqRing& F) {
  int m = static_cast<int>(mu.size()) - 1;
  if (m <= 1) return {FqPoly{F.one()}};
  FqPoly xq = polypowmod(FqPoly{F.zero(), F.one()}, F.q(), mu, F);
  Mat Q(F, m, m);  // column i = X^{iq} - X^i
  FqPoly cur{F.one()};
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < static_cast<int>(cur.size()); ++j) Q(j, i) = cur[j];
    Q(i, i) -= F.one();
    cur = polymulmod(cur, xq, mu, F);
  }
  auto ker = nullspace(Q);
  if (ker.size() <= 1) return {FqPoly{F.one()}};
  auto elems = field_elements(F);
  std::vector<FqPoly> idem{FqPoly{F.one()}};
  for (auto& w : ker) {
    FqPoly wp(w.begin(), w.end());
    trim(wp);
    std::vector<FqPoly> next;
    for (auto& eps : idem) {
      for (auto& alpha : elems) {
        FqPoly t = wp;
        if (t.empty()) t.push_back(F.zero());
        t[0] -= alpha;
        FqPoly s = polypowmod(t, F.q() - 1, mu, F);
        // 1 - s
        FqPoly one_minus(std::max<size_t>(s.size(), 1), F.zero());
        for (size_t i = 0; i < s.size(); ++i) one_minus[i] = -s[i];
        one_minus[0] += F.one();
        trim(one_minus);
        FqPoly piece = polymulmod(eps, one_minus, mu, F);
        if (!piece.empty()) next.push_back(piece);
      }
    }
    idem = std::move(next);
  }
  if (idem.size() != ker.size()) throw InvariantViolation("Berlekamp splitting produced the wrong number of idempotents");
  return idem;
}

}  // namespace detail

// ------------------------------------------------- idempotent decomposition

/// Local data of a corner eAe over the residue field.
struct CornerInfo {
  Vec e;
  std::vector<Vec> basis;  // corner basis in A coordinates
  std::vector<Vec> radical;  // J(eAe) in A coordinates
  int dim_eA = 0, dim_Ae = 0;
};

inline std::vector<Vec> span_of_columns(const Mat& M) {
  SpanBasis S(*M.R, M.rows);
  for (int j = 0; j < M.cols; ++j) S.insert(M.column(j));
  return S.vectors();
}

inline std::vector<Vec> corner_basis(const FinAlgebra& A, const Vec& e) {
  Mat Re = A.right_matrix(e);
  SpanBasis S(A.ring(), A.rank());
  for (auto& v : span_of_columns(Re)) S.insert(A.mul(e, v));
  return S.vectors();
}

/**
 * Primitive decompositions over the residue field and their lifts.
 * All randomness comes from the seed.
 */
class IdempotentEngine {
 public:
  IdempotentEngine(const FinAlgebra& A, u64 seed) : A_(A), Abar_(A.reduced(A.ring().residue())), rng_(seed) {}

  const FinAlgebra& algebra() const { return A_; }
  const FinAlgebra& residual_algebra() const { return Abar_; }

  /// Primitive orthogonal idempotents mod p summing to ebar.
  std::vector<Vec> split_mod_p(const Vec& ebar) {
    std::vector<Vec> out;
    split_rec(ebar, out);
    return out;
  }

  /// Lifts an orthogonal family (mod p) summing to ebar = eps mod p, where
  /// eps is an exact idempotent of A.  The lifts are orthogonal and sum to eps.
  std::vector<Vec> lift(const Vec& eps, const std::vector<Vec>& bars) {
    const ZqRing& R = A_.ring();
    std::vector<Vec> out;
    Vec rest = eps;
    for (size_t i = 0; i < bars.size(); ++i) {
      if (i + 1 == bars.size()) {
        out.push_back(rest);
        break;
      }
      Vec x = A_.mul(A_.mul(rest, lift_coeffs(bars[i], R)), rest);
      x = newton_idempotent(x);
      out.push_back(x);
      for (int j = 0; j < A_.rank(); ++j) rest[j] -= x[j];
    }
    for (size_t i = 0; i < out.size(); ++i)
      if (reduce_vec(out[i], A_.ring().residue()) != bars[i]) throw InvariantViolation("lifted idempotent does not reduce correctly");
    return out;
  }

  /// Local certificate and radical of the corner eAe (mod p).
  CornerInfo corner(const Vec& ebar) {
    CornerInfo c;
    c.e = ebar;
    c.basis = corner_basis(Abar_, ebar);
    FinAlgebra L = subalgebra(Abar_, c.basis, ebar);
    auto J = radical(L);
    if (!is_local(L, J)) throw InvariantViolation("corner is not local");
    for (auto& v : J) {
      Vec w = Abar_.zero();
      for (size_t s = 0; s < c.basis.size(); ++s) axpy(w, v[s], c.basis[s]);
      c.radical.push_back(w);
    }
    c.dim_eA = static_cast<int>(span_of_columns(Abar_.left_matrix(ebar)).size());
    c.dim_Ae = static_cast<int>(span_of_columns(Abar_.right_matrix(ebar)).size());
    return c;
  }

  /// e ~ f iff some x in eAf, y in fAe has xy outside J(eAe).
  bool isomorphic(const CornerInfo& ce, const CornerInfo& cf) {
    if (ce.basis.size() != cf.basis.size() || ce.dim_eA != cf.dim_eA || ce.dim_Ae != cf.dim_Ae) return false;
    auto eAf = two_sided(ce.e, cf.e);
    auto fAe = two_sided(cf.e, ce.e);
    SpanBasis J(Abar_.ring(), Abar_.rank());
    for (auto& v : ce.radical) J.insert(v);
    for (auto& x : eAf)
      for (auto& y : fAe)
        if (!J.contains(Abar_.mul(x, y))) return true;
    return false;
  }

 private:
  std::vector<Vec> two_sided(const Vec& e, const Vec& f) {
    SpanBasis S(Abar_.ring(), Abar_.rank());
    for (auto& v : span_of_columns(Abar_.right_matrix(f))) S.insert(Abar_.mul(e, v));
    return S.vectors();
  }

  static Vec lift_coeffs(const Vec& v, const ZqRing& R) {
    Vec out = zero_vec(R, static_cast<int>(v.size()));
    for (size_t i = 0; i < v.size(); ++i)
      for (int a = 0; a < R.f(); ++a) out[i].c[a] = v[i].c[a];
    return out;
  }

  Vec newton_idempotent(Vec x) {
    const ZqRing& R = A_.ring();
    ZqElem three = R.from_int(3), two = R.from_int(2);
    for (int it = 0; it < 80; ++it) {
      Vec x2 = A_.mul(x, x);
      if (x2 == x) return x;
      Vec x3 = A_.mul(x2, x);
      for (int i = 0; i < A_.rank(); ++i) x[i] = three * x2[i] - two * x3[i];
    }
    throw PrecisionExhausted("idempotent lifting did not stabilize");
  }

  Vec random_element(const std::vector<Vec>& basis) {
    const ZqRing& F = Abar_.ring();
    Vec x = Abar_.zero();
    for (auto& b : basis) {
      ZqElem c = F.zero();
      for (int a = 0; a < F.f(); ++a) c.c[a] = rng_.below(F.p());
      axpy(x, c, b);
    }
    return x;
  }

  void split_rec(const Vec& e, std::vector<Vec>& out) {
    auto basis = corner_basis(Abar_, e);
    if (basis.size() == 1) {
      out.push_back(e);
      return;
    }
    const ZqRing& F = Abar_.ring();
    bool certified = false;
    for (int trial = 0; trial < 400; ++trial) {
      if (trial == 6 || (trial > 6 && trial % 50 == 0)) {
        FinAlgebra L = subalgebra(Abar_, basis, e);
        if (is_local(L, radical(L))) {
          certified = true;
          break;
        }
      }
      Vec x = random_element(basis);
      // powers of x with unit e until dependence
      std::vector<Vec> pw{e};
      SpanBasis S(F, Abar_.rank());
      S.insert(e);
      detail::FqPoly mu;
      while (true) {
        Vec nxt = Abar_.mul(pw.back(), x);
        Vec coef;
        Vec res = S.reduce(nxt, &coef);
        if (is_zero(res)) {
          // nxt = sum coef_i pw_i  =>  mu = X^m - sum coef_i X^i
          int m = static_cast<int>(pw.size());
          mu.assign(m + 1, F.zero());
          for (int i = 0; i < m; ++i) mu[i] = -coef[i];
          mu[m] = F.one();
          break;
        }
        S.insert(nxt);
        pw.push_back(nxt);
      }
      auto idem = detail::berlekamp_idempotents(mu, F);
      if (idem.size() < 2) continue;
      for (auto& eps : idem) {
        Vec y = Abar_.zero();
        for (size_t i = 0; i < eps.size(); ++i) axpy(y, eps[i], pw[i]);
        split_rec(y, out);
      }
      return;
    }
    if (!certified) throw InvariantViolation("failed to split or certify a corner");
    out.push_back(e);
  }

  const FinAlgebra& A_;
  FinAlgebra Abar_;
  Rng rng_;
};

struct Decomposition {
  std::vector<Vec> idempotents;  // exact over Z_q/p^k, orthogonal
  std::vector<int> iso_class;    // class index per idempotent, by first appearance
  int num_classes = 0;
  std::vector<CornerInfo> class_reps;  // residue data of one idempotent per class
};

/**
 * Decomposes the corner eps A eps (eps an exact idempotent) into primitive
 * orthogonal idempotents and sorts them into isomorphism classes.
 */
inline Decomposition decompose_corner(const FinAlgebra& A, const Vec& eps, u64 seed, bool classify = true) {
  IdempotentEngine eng(A, seed);
  Decomposition D;
  if (is_zero(eps)) return D;
  Vec ebar = reduce_vec(eps, A.ring().residue());
  auto bars = eng.split_mod_p(ebar);
  D.idempotents = eng.lift(eps, bars);
  if (!classify) return D;
  for (auto& b : bars) {
    CornerInfo ci = eng.corner(b);
    int cls = -1;
    for (int c = 0; c < D.num_classes && cls < 0; ++c)
      if (eng.isomorphic(D.class_reps[c], ci)) cls = c;
    if (cls < 0) {
      cls = D.num_classes++;
      D.class_reps.push_back(ci);
    }
    D.iso_class.push_back(cls);
  }
  return D;
}

/// Primitive orthogonal idempotents of A summing to 1.
inline std::vector<Vec> lift_idempotents(const FinAlgebra& A, u64 seed = 0) {
  return decompose_corner(A, A.unit(), seed, false).idempotents;
}

}  // namespace kq
