#pragma once

#include <algorithm>
#include <vector>

#include "kq/error.hpp"
#include "kq/zq.hpp"

namespace kq {

using Vec = std::vector<ZqElem>;

inline Vec zero_vec(const ZqRing& R, int n) { return Vec(n, R.zero()); }

inline bool is_zero(const Vec& v) {
  for (auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline Vec reduce_vec(const Vec& v, const ZqRing& S) {
  Vec r;
  r.reserve(v.size());
  for (auto& x : v) r.push_back(x.reduce_to(S));
  return r;
}

inline void axpy(Vec& y, const ZqElem& a, const Vec& x) {
  if (a.is_zero()) return;
  for (size_t i = 0; i < y.size(); ++i)
    if (!x[i].is_zero()) y[i] += a * x[i];
}

/// c/p^v coefficientwise; the caller guarantees v <= valuation(c).
inline ZqElem divide_p_power(const ZqElem& c, int v) {
  ZqElem r = c;
  u64 pv = ipow(c.R().p(), v);
  for (int i = 0; i < c.R().f(); ++i) r.c[i] = c.c[i] / pv;
  return r;
}

/** Dense row-major matrix over one ZqRing. */
struct Mat {
  const ZqRing* R = nullptr;
  int rows = 0, cols = 0;
  std::vector<ZqElem> a;

  Mat() = default;
  Mat(const ZqRing& ring, int r, int c) : R(&ring), rows(r), cols(c), a(static_cast<size_t>(r) * c, ring.zero()) {}
  static Mat identity(const ZqRing& ring, int n) {
    Mat m(ring, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = ring.one();
    return m;
  }
  static Mat from_columns(const ZqRing& ring, int rows, const std::vector<Vec>& cols) {
    Mat m(ring, rows, static_cast<int>(cols.size()));
    for (int j = 0; j < m.cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }
  ZqElem& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const ZqElem& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  Vec column(int j) const {
    Vec v;
    for (int i = 0; i < rows; ++i) v.push_back((*this)(i, j));
    return v;
  }
  Vec row(int i) const { return Vec(a.begin() + static_cast<size_t>(i) * cols, a.begin() + static_cast<size_t>(i + 1) * cols); }
  Mat reduced(const ZqRing& S) const {
    Mat m(S, rows, cols);
    for (size_t i = 0; i < a.size(); ++i) m.a[i] = a[i].reduce_to(S);
    return m;
  }
  Mat transpose() const {
    Mat m(*R, cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
    return m;
  }
  Vec apply(const Vec& v) const {
    Vec out = zero_vec(*R, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (!v[j].is_zero() && !(*this)(i, j).is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
  }
  friend Mat operator*(const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw InputError("matrix dimensions do not match");
    Mat C(*A.R, A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
      for (int k = 0; k < A.cols; ++k) {
        const ZqElem& x = A(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < B.cols; ++j)
          if (!B(k, j).is_zero()) C(i, j) += x * B(k, j);
      }
    return C;
  }
  friend Mat operator+(Mat A, const Mat& B) {
    for (size_t i = 0; i < A.a.size(); ++i) A.a[i] += B.a[i];
    return A;
  }
  friend Mat operator-(Mat A, const Mat& B) {
    for (size_t i = 0; i < A.a.size(); ++i) A.a[i] -= B.a[i];
    return A;
  }
  bool operator==(const Mat& B) const {
    if (rows != B.rows || cols != B.cols) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != B.a[i]) return false;
    return true;
  }
  bool is_zero() const {
    for (auto& x : a)
      if (!x.is_zero()) return false;
    return true;
  }
};

// ------------------------------------------------------------ over a field
// The routines below require k = 1 (the residue field F_q).

struct Echelon {
  Mat m;                 // reduced row echelon form
  std::vector<int> pivots;  // pivot column of each nonzero row
  int rank() const { return static_cast<int>(pivots.size()); }
};

inline Echelon rref(Mat m) {
  if (m.R->k() != 1) throw InputError("rref needs a field");
  Echelon e;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i)
      if (!m(i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m(r, j), m(piv, j));
    ZqElem inv = m(r, c).inverse();
    for (int j = c; j < m.cols; ++j) m(r, j) = m(r, j) * inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      ZqElem f = m(i, c);
      for (int j = c; j < m.cols; ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    e.pivots.push_back(c);
    ++r;
  }
  e.m = std::move(m);
  return e;
}

inline int rank_mod_p(const Mat& m) { return rref(m.reduced(m.R->residue())).rank(); }

/// Basis (as columns) of the right kernel over the residue field.
inline std::vector<Vec> nullspace(const Mat& m) {
  Echelon e = rref(m.reduced(m.R->residue()));
  const ZqRing& F = *e.m.R;
  std::vector<char> is_piv(m.cols, 0);
  for (int c : e.pivots) is_piv[c] = 1;
  std::vector<Vec> out;
  for (int free = 0; free < m.cols; ++free) {
    if (is_piv[free]) continue;
    Vec v = zero_vec(F, m.cols);
    v[free] = F.one();
    for (int i = 0; i < e.rank(); ++i) v[e.pivots[i]] = -e.m(i, free);
    out.push_back(v);
  }
  return out;
}

/**
 * Incrementally maintained basis of a subspace of F_q^n with coordinates
 * of each stored vector in terms of the inserted generators.
 */
class SpanBasis {
 public:
  SpanBasis(const ZqRing& F, int n) : F_(&F), n_(n) {}

  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<Vec>& vectors() const { return orig_; }

  /// Reduces v against the basis; returns the residual and fills `coef` with
  /// the combination of stored original vectors that was subtracted.
  Vec reduce(Vec v, Vec* coef = nullptr) const {
    if (coef) *coef = zero_vec(*F_, dim());
    for (int i = 0; i < dim(); ++i) {
      const ZqElem& x = v[piv_[i]];
      if (x.is_zero()) continue;
      ZqElem f = x;
      axpy(v, -f, rows_[i]);
      if (coef) axpy(*coef, f, combo_[i]);
    }
    return v;
  }
  bool contains(const Vec& v) const { return is_zero(reduce(v)); }

  /// Adds v if independent; returns true when the dimension grew.
  bool insert(const Vec& v) {
    Vec coef;
    Vec r = reduce(v, &coef);
    int p = -1;
    for (int i = 0; i < n_; ++i)
      if (!r[i].is_zero()) {
        p = i;
        break;
      }
    if (p < 0) return false;
    ZqElem inv = r[p].inverse();
    for (auto& x : r) x = x * inv;
    // new combo: (v - sum coef_i orig_i) * inv, expressed in originals
    Vec combo = zero_vec(*F_, dim() + 1);
    for (int i = 0; i < dim(); ++i) combo[i] = -coef[i] * inv;
    combo[dim()] = inv;
    for (auto& c : combo_) c.push_back(F_->zero());
    // keep rows fully reduced at pivot columns
    for (int i = 0; i < dim(); ++i) {
      const ZqElem x = rows_[i][p];
      if (x.is_zero()) continue;
      axpy(rows_[i], -x, r);
      axpy(combo_[i], -x, combo);
    }
    rows_.push_back(r);
    piv_.push_back(p);
    combo_.push_back(combo);
    orig_.push_back(v);
    return true;
  }

  /// Coordinates of v in terms of the inserted vectors; v must lie in the span.
  Vec coordinates(const Vec& v) const {
    Vec coef;
    Vec r = reduce(v, &coef);
    if (!is_zero(r)) throw InvariantViolation("vector is not in the span");
    return coef;
  }

 private:
  const ZqRing* F_;
  int n_;
  std::vector<Vec> rows_, combo_, orig_;
  std::vector<int> piv_;
};

// ---------------------------------------------------------- over Z/p^k

/**
 * Smith form U A V = D over Z_q / p^k, with D diagonal with entries p^{v_i}
 * for i < rank and zero beyond.  v_i is nondecreasing.
 */
struct SmithForm {
  Mat U, V;
  std::vector<int> vals;  // valuations of the nonzero diagonal entries
  int rank() const { return static_cast<int>(vals.size()); }
  int max_valuation() const { return vals.empty() ? 0 : vals.back(); }
};

inline SmithForm smith(const Mat& A) {
  const ZqRing& R = *A.R;
  Mat M = A;
  Mat U = Mat::identity(R, A.rows), V = Mat::identity(R, A.cols);
  SmithForm s;
  int n = std::min(A.rows, A.cols);
  for (int t = 0; t < n; ++t) {
    int bi = -1, bj = -1, bv = R.k();
    for (int i = t; i < M.rows; ++i)
      for (int j = t; j < M.cols; ++j) {
        int v = M(i, j).valuation();
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) break;
    if (bi != t) {
      for (int j = 0; j < M.cols; ++j) std::swap(M(t, j), M(bi, j));
      for (int j = 0; j < U.cols; ++j) std::swap(U(t, j), U(bi, j));
    }
    if (bj != t) {
      for (int i = 0; i < M.rows; ++i) std::swap(M(i, t), M(i, bj));
      for (int i = 0; i < V.rows; ++i) std::swap(V(i, t), V(i, bj));
    }
    ZqElem unit = divide_p_power(M(t, t), bv);
    ZqElem uinv = unit.inverse();
    for (int j = 0; j < M.cols; ++j) M(t, j) = M(t, j) * uinv;
    for (int j = 0; j < U.cols; ++j) U(t, j) = U(t, j) * uinv;
    for (int i = 0; i < M.rows; ++i) {
      if (i == t || M(i, t).is_zero()) continue;
      ZqElem f = divide_p_power(M(i, t), bv);
      for (int j = 0; j < M.cols; ++j)
        if (!M(t, j).is_zero()) M(i, j) -= f * M(t, j);
      for (int j = 0; j < U.cols; ++j)
        if (!U(t, j).is_zero()) U(i, j) -= f * U(t, j);
    }
    for (int j = 0; j < M.cols; ++j) {
      if (j == t || M(t, j).is_zero()) continue;
      ZqElem f = divide_p_power(M(t, j), bv);
      for (int i = 0; i < M.rows; ++i)
        if (!M(i, t).is_zero()) M(i, j) -= f * M(i, t);
      for (int i = 0; i < V.rows; ++i)
        if (!V(i, t).is_zero()) V(i, j) -= f * V(i, t);
    }
    s.vals.push_back(bv);
  }
  s.U = std::move(U);
  s.V = std::move(V);
  return s;
}

/// Right kernel over Z_q of a matrix known to precision k.  The kernel is
/// certified when every nonzero pivot has valuation below k/2.
inline std::vector<Vec> kernel_zq(const Mat& A, bool certify = true) {
  SmithForm s = smith(A);
  if (certify && 2 * s.max_valuation() >= A.R->k())
    throw PrecisionExhausted("kernel pivot valuation " + std::to_string(s.max_valuation()) + " too close to precision " + std::to_string(A.R->k()));
  std::vector<Vec> out;
  for (int j = s.rank(); j < A.cols; ++j) out.push_back(s.V.column(j));
  return out;
}

/// Basis of the column span of A, which must be a saturated submodule
/// (all nonzero elementary divisors units).
inline std::vector<Vec> image_zq(const Mat& A);

/// Inverse of a square matrix invertible modulo p.
inline Mat inverse(const Mat& A) {
  const ZqRing& R = *A.R;
  int n = A.rows;
  Mat M = A, I = Mat::identity(R, n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (M(i, c).is_unit()) {
        piv = i;
        break;
      }
    if (piv < 0) throw DivisibilityError("matrix is not invertible modulo p");
    if (piv != c)
      for (int j = 0; j < n; ++j) {
        std::swap(M(c, j), M(piv, j));
        std::swap(I(c, j), I(piv, j));
      }
    ZqElem inv = M(c, c).inverse();
    for (int j = 0; j < n; ++j) {
      M(c, j) = M(c, j) * inv;
      I(c, j) = I(c, j) * inv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == c || M(i, c).is_zero()) continue;
      ZqElem f = M(i, c);
      for (int j = 0; j < n; ++j) {
        if (!M(c, j).is_zero()) M(i, j) -= f * M(c, j);
        if (!I(c, j).is_zero()) I(i, j) -= f * I(c, j);
      }
    }
  }
  return I;
}

inline std::vector<Vec> image_zq(const Mat& A) {
  SmithForm s = smith(A);
  for (int v : s.vals)
    if (v != 0) throw InvariantViolation("column span is not saturated");
  Mat Ui = inverse(s.U);
  std::vector<Vec> out;
  for (int j = 0; j < s.rank(); ++j) out.push_back(Ui.column(j));
  return out;
}

/// Elementary divisor valuations of the lattice spanned by `cols`.
inline std::vector<int> smith_valuations(const ZqRing& R, int n, const std::vector<Vec>& cols) {
  if (cols.empty()) return {};
  return smith(Mat::from_columns(R, n, cols)).vals;
}

/// Solves B x = v for a basis B (columns) of a saturated submodule, exactly
/// modulo p^k.  Returns false if v is not in the span.
inline bool solve_saturated(const Mat& B, const Vec& v, Vec* x) {
  const ZqRing& R = *B.R;
  // choose rows giving an invertible minor mod p
  Mat Bt = B.transpose();
  Echelon e = rref(Bt.reduced(R.residue()));
  if (e.rank() != B.cols) throw InputError("basis is not independent modulo p");
  Mat minor(R, B.cols, B.cols);
  for (int i = 0; i < B.cols; ++i)
    for (int j = 0; j < B.cols; ++j) minor(i, j) = B(e.pivots[i], j);
  Mat inv = inverse(minor);
  Vec rhs;
  for (int i = 0; i < B.cols; ++i) rhs.push_back(v[e.pivots[i]]);
  Vec sol = inv.apply(rhs);
  Vec back = B.apply(sol);
  for (size_t i = 0; i < v.size(); ++i)
    if (back[i] != v[i]) return false;
  if (x) *x = sol;
  return true;
}

// ---------------------------------------------- small prime field helpers

using ModMat = std::vector<std::vector<u64>>;

inline int rank_mod_ell(ModMat m, u64 ell) {
  int rows = static_cast<int>(m.size());
  if (!rows) return 0;
  int cols = static_cast<int>(m[0].size()), r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] % ell) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    u64 inv = invmod(m[r][c] % ell, ell);
    for (int j = c; j < cols; ++j) m[r][j] = mulmod(m[r][j] % ell, inv, ell);
    for (int i = r + 1; i < rows; ++i) {
      u64 f = m[i][c] % ell;
      if (!f) continue;
      for (int j = c; j < cols; ++j) m[i][j] = (m[i][j] % ell + ell - mulmod(f, m[r][j], ell)) % ell;
    }
    ++r;
  }
  return r;
}

/// Right kernel basis modulo a prime.
inline std::vector<std::vector<u64>> nullspace_mod_ell(ModMat m, int cols, u64 ell) {
  int rows = static_cast<int>(m.size()), r = 0;
  std::vector<int> piv;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] % ell) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[r], m[pr]);
    u64 inv = invmod(m[r][c] % ell, ell);
    for (int j = 0; j < cols; ++j) m[r][j] = mulmod(m[r][j] % ell, inv, ell);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      u64 f = m[i][c] % ell;
      if (!f) continue;
      for (int j = 0; j < cols; ++j) m[i][j] = (m[i][j] % ell + ell - mulmod(f, m[r][j], ell)) % ell;
    }
    piv.push_back(c);
    ++r;
  }
  std::vector<char> isp(cols, 0);
  for (int c : piv) isp[c] = 1;
  std::vector<std::vector<u64>> out;
  for (int fcol = 0; fcol < cols; ++fcol) {
    if (isp[fcol]) continue;
    std::vector<u64> v(cols, 0);
    v[fcol] = 1;
    for (int i = 0; i < r; ++i) v[piv[i]] = (ell - m[i][fcol] % ell) % ell;
    out.push_back(v);
  }
  return out;
}

}  // namespace kq
