#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kq/linalg.hpp"

namespace kq {

/// A Z_p[Z/p]-lattice: Z_p^n with generator T, stored modulo p^k.
struct ZpZpLattice {
  u64 p = 2;
  int k = 8;
  Mat T;
  int rank() const { return T.rows; }
  const ZqRing& ring() const { return *T.R; }
};

inline Mat int_matrix(const ZqRing& R, const std::vector<std::vector<i64>>& M) {
  int n = static_cast<int>(M.size());
  Mat A(R, n, n == 0 ? 0 : static_cast<int>(M[0].size()));
  for (int i = 0; i < A.rows; ++i) {
    if (static_cast<int>(M[i].size()) != A.cols) throw InputError("ragged matrix");
    for (int j = 0; j < A.cols; ++j) A(i, j) = R.from_int(M[i][j]);
  }
  return A;
}

/// Validates T^p = I and det T a unit mod p.
inline ZpZpLattice make_lattice(u64 p, int k, Mat T) {
  if (!is_prime(p)) throw InputError("p must be prime");
  if (T.rows != T.cols) throw InputError("generator matrix must be square");
  const ZqRing& R = ZqRing::get(p, 1, k);
  if (T.R != &R) T = T.reduced(R);
  int n = T.rows;
  Mat P = Mat::identity(R, n);
  for (u64 i = 0; i < p; ++i) P = P * T;
  if (!(P == Mat::identity(R, n))) throw InputError("generator does not satisfy T^p = I");
  if (n > 0 && rank_mod_p(T) != n) throw InputError("generator is not invertible modulo p");
  return ZpZpLattice{p, k, std::move(T)};
}

inline ZpZpLattice make_lattice(u64 p, int k, const std::vector<std::vector<i64>>& T) {
  return make_lattice(p, k, int_matrix(ZqRing::get(p, 1, k), T));
}

/// V1: the regular lattice (cyclic permutation of p coordinates).
inline std::vector<std::vector<i64>> v1_matrix(u64 p) {
  std::vector<std::vector<i64>> T(p, std::vector<i64>(p, 0));
  for (u64 i = 0; i < p; ++i) T[(i + 1) % p][i] = 1;
  return T;
}
/// V2: the trivial lattice.
inline std::vector<std::vector<i64>> v2_matrix(u64) { return {{1}}; }
/// V3 = Z_p[zeta_p]: companion matrix of 1 + x + ... + x^{p-1}.
inline std::vector<std::vector<i64>> v3_matrix(u64 p) {
  int n = static_cast<int>(p) - 1;
  std::vector<std::vector<i64>> T(n, std::vector<i64>(n, 0));
  for (int i = 1; i < n; ++i) T[i][i - 1] = 1;
  for (int i = 0; i < n; ++i) T[i][n - 1] = -1;
  return T;
}

inline std::vector<std::vector<i64>> block_sum(const std::vector<std::vector<std::vector<i64>>>& blocks) {
  size_t n = 0;
  for (auto& b : blocks) n += b.size();
  std::vector<std::vector<i64>> T(n, std::vector<i64>(n, 0));
  size_t off = 0;
  for (auto& b : blocks) {
    for (size_t i = 0; i < b.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) T[off + i][off + j] = b[i][j];
    off += b.size();
  }
  return T;
}

/// V1^a + V2^b + V3^c.
inline std::vector<std::vector<i64>> model_matrix(u64 p, int a, int b, int c) {
  std::vector<std::vector<std::vector<i64>>> blocks;
  for (int i = 0; i < a; ++i) blocks.push_back(v1_matrix(p));
  for (int i = 0; i < b; ++i) blocks.push_back(v2_matrix(p));
  for (int i = 0; i < c; ++i) blocks.push_back(v3_matrix(p));
  return block_sum(blocks);
}

inline ZpZpLattice direct_sum(const ZpZpLattice& V, const ZpZpLattice& W) {
  if (V.p != W.p || V.k != W.k) throw InputError("lattices over different rings");
  const ZqRing& R = V.ring();
  int n = V.rank(), m = W.rank();
  Mat T(R, n + m, n + m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) T(i, j) = V.T(i, j);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) T(n + i, n + j) = W.T(i, j);
  return ZpZpLattice{V.p, V.k, T};
}

/// Random matrix invertible mod p.
inline Mat random_unimodular(const ZqRing& R, int n, Rng& rng) {
  while (true) {
    Mat U(R, n, n);
    for (auto& x : U.a) x = R.from_int(static_cast<i64>(rng.below(R.modulus())));
    if (n == 0 || rank_mod_p(U) == n) return U;
  }
}

inline ZpZpLattice conjugate(const ZpZpLattice& V, const Mat& U) {
  return ZpZpLattice{V.p, V.k, U * V.T * inverse(U)};
}

// ---------------------------------------------------------------- cohomology

/// A finitely generated Z_p-module: Z_p^free + sum Z/p^{t_i}.
struct AbDescriptor {
  int free_rank = 0;
  std::vector<int> torsion;  // exponents, nondecreasing
  bool operator==(const AbDescriptor& o) const { return free_rank == o.free_rank && torsion == o.torsion; }
  bool operator!=(const AbDescriptor& o) const { return !(*this == o); }
  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    if (free_rank) s = "Z_p" + (free_rank > 1 ? "^" + std::to_string(free_rank) : "");
    for (int t : torsion) s += (s.empty() ? "" : " + ") + std::string("Z/p") + (t > 1 ? "^" + std::to_string(t) : "");
    return s;
  }
};

inline Mat norm_element(const ZpZpLattice& V) {
  const ZqRing& R = V.ring();
  Mat N(R, V.rank(), V.rank()), P = Mat::identity(R, V.rank());
  for (u64 j = 0; j < V.p; ++j) {
    N = N + P;
    P = P * V.T;
  }
  return N;
}

/// ker(A) / im(B) with A B = 0, certified: every pivot valuation is below
/// half the precision available at its stage.
inline AbDescriptor subquotient(const Mat& A, const Mat& B) {
  const ZqRing& R = *A.R;
  SmithForm sa = smith(A);
  if (2 * sa.max_valuation() >= R.k())
    throw PrecisionExhausted("pivot valuation " + std::to_string(sa.max_valuation()) + " too close to precision " + std::to_string(R.k()));
  int r = A.cols - sa.rank();  // rank of the kernel
  AbDescriptor d;
  if (r == 0) return d;
  // kernel coordinates of the columns of B: the last r rows of V^{-1} B,
  // exact modulo p^{k - vmax}
  Mat C = inverse(sa.V) * B;
  const int k2 = R.k() - sa.max_valuation();
  const ZqRing& R2 = R.with_precision(k2);
  Mat Cr(R2, r, B.cols);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < B.cols; ++j) Cr(i, j) = C(sa.rank() + i, j).reduce_to(R2);
  // the other rows must vanish to that precision
  for (int i = 0; i < sa.rank(); ++i)
    for (int j = 0; j < B.cols; ++j)
      if (C(i, j).valuation() < R.k() - sa.vals[i]) throw InvariantViolation("image does not lie in the kernel");
  SmithForm sc = smith(Cr);
  if (2 * sc.max_valuation() >= k2)
    throw PrecisionExhausted("pivot valuation " + std::to_string(sc.max_valuation()) + " too close to precision " + std::to_string(k2));
  d.free_rank = r - sc.rank();
  for (int v : sc.vals)
    if (v > 0) d.torsion.push_back(v);
  return d;
}

/// H^i(Z/p; V): H^0 = V^{Z/p} (a lattice), then ker(T-1)/N and ker N/(T-1)
/// alternately from the periodic resolution.
inline AbDescriptor group_cohomology(const ZpZpLattice& V, int i) {
  if (i < 0) throw InputError("cohomological degree must be nonnegative");
  const ZqRing& R = V.ring();
  Mat TI = V.T - Mat::identity(R, V.rank());
  Mat N = norm_element(V);
  // over Q_p the space splits as ker(T-1) + ker N, so the two ranks add up to
  // n; a smaller sum means an entry vanished only modulo p^k
  SmithForm s = smith(TI);
  if (s.rank() + smith(N).rank() != V.rank())
    throw PrecisionExhausted("ranks of T-1 and N are not determined at precision " + std::to_string(R.k()));
  if (i == 0) {
    if (2 * s.max_valuation() >= R.k())
      throw PrecisionExhausted("pivot valuation " + std::to_string(s.max_valuation()) + " too close to precision " + std::to_string(R.k()));
    return AbDescriptor{V.rank() - s.rank(), {}};
  }
  return i % 2 == 0 ? subquotient(TI, N) : subquotient(N, TI);
}

struct HRDecomp {
  int a = 0, b = 0, c = 0;  // multiplicities of V1, V2, V3
  bool operator==(const HRDecomp& o) const { return a == o.a && b == o.b && c == o.c; }
};

/// Heller-Reiner multiplicities from cohomology: c = dim H^1, b = dim H^2,
/// a = rank V^{Z/p} - b, then checked against the rank and the model lattice.
inline HRDecomp heller_reiner(const ZpZpLattice& V) {
  AbDescriptor h0 = group_cohomology(V, 0), h1 = group_cohomology(V, 1), h2 = group_cohomology(V, 2);
  auto elementary = [](const AbDescriptor& d) {
    return d.free_rank == 0 && std::all_of(d.torsion.begin(), d.torsion.end(), [](int t) { return t == 1; });
  };
  if (!elementary(h1) || !elementary(h2)) throw InconsistentInvariants("H^1 or H^2 is not an F_p-vector space");
  HRDecomp d;
  d.c = static_cast<int>(h1.torsion.size());
  d.b = static_cast<int>(h2.torsion.size());
  d.a = h0.free_rank - d.b;
  const int p = static_cast<int>(V.p);
  if (d.a < 0 || p * d.a + d.b + (p - 1) * d.c != V.rank())
    throw InconsistentInvariants("multiplicities do not add up to the rank");
  ZpZpLattice M = make_lattice(V.p, V.k, model_matrix(V.p, d.a, d.b, d.c));
  for (int i = 0; i <= 2; ++i)
    if (group_cohomology(M, i) != group_cohomology(V, i)) throw InconsistentInvariants("model lattice has different cohomology");
  return d;
}

// ----------------------------------------------------------------- E2 page

struct E2Tag {
  std::string kind;  // "free" (R_*), "tors" (R_{*-1}/p), "P"
  int s = 0, t = 0;  // bidegree of the generator
  int count = 0;
};

/// E2^{s,t} = H^s(Z/p; pi_t) for t mod 2 and 0 <= s <= s_max.
struct E2Page {
  u64 p = 2;
  int s_max = 0;
  std::vector<std::array<AbDescriptor, 2>> cells;  // cells[s][t]
  std::vector<E2Tag> tags;
  bool periodic = true;    // cell(s) = cell(s + 2) for s >= 1
  bool tags_match = true;  // the page predicted by the tags equals the computed page
  bool generated_low = true;  // every tag generator sits in s <= 1
};

inline E2Page e2_page(const std::optional<ZpZpLattice>& pi0, const std::optional<ZpZpLattice>& pi1, int s_max) {
  if (s_max < 0) throw InputError("s_max must be nonnegative");
  E2Page E;
  E.s_max = s_max;
  if (pi0 && pi1 && (pi0->p != pi1->p)) throw InputError("homotopy lattices over different primes");
  E.p = pi0 ? pi0->p : (pi1 ? pi1->p : 2);
  E.cells.assign(s_max + 1, {});
  const std::optional<ZpZpLattice>* pis[2] = {&pi0, &pi1};
  for (int t = 0; t < 2; ++t) {
    if (!*pis[t]) continue;
    const ZpZpLattice& V = **pis[t];
    for (int s = 0; s <= s_max; ++s) E.cells[s][t] = group_cohomology(V, s);
    HRDecomp d = heller_reiner(V);
    if (d.b) E.tags.push_back({"free", 0, t, d.b});
    if (d.c) E.tags.push_back({"tors", 1, t, d.c});
    if (d.a) E.tags.push_back({"P", 0, t, d.a});
    // predicted: s = 0 lattice of rank a + b; odd s: c copies of Z/p; even s >= 2: b copies
    for (int s = 0; s <= s_max; ++s) {
      AbDescriptor want;
      if (s == 0)
        want.free_rank = d.a + d.b;
      else
        want.torsion.assign(s % 2 ? d.c : d.b, 1);
      if (want != E.cells[s][t]) E.tags_match = false;
    }
  }
  for (int s = 1; s + 2 <= s_max; ++s)
    for (int t = 0; t < 2; ++t)
      if (E.cells[s][t] != E.cells[s + 2][t]) E.periodic = false;
  for (auto& g : E.tags)
    if (g.s > 1) E.generated_low = false;
  return E;
}

}  // namespace kq
