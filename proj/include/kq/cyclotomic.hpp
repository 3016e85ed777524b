#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "kq/error.hpp"
#include "kq/numeric.hpp"

namespace kq {

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
inline std::vector<i64> cyclotomic_polynomial(int n) {
  // x^n - 1 divided by Phi_d for all proper divisors d
  std::vector<i64> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d) continue;
    auto den = cyclotomic_polynomial(d);
    int dd = static_cast<int>(den.size()) - 1;
    std::vector<i64> quo(num.size() - dd, 0);
    for (int i = static_cast<int>(num.size()) - 1; i >= dd; --i) {
      i64 c = num[i];
      quo[i - dd] = c;
      for (int j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    num = quo;
  }
  return num;
}

/// Reduction data for Q(zeta_n): row j is x^j mod Phi_n for 0 <= j < n.
struct CycTable {
  int n = 1;
  int phi = 1;
  std::vector<std::vector<i64>> red;
};

inline std::shared_ptr<const CycTable> cyc_table(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const CycTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<CycTable>();
  t->n = n;
  auto P = cyclotomic_polynomial(n);
  t->phi = static_cast<int>(P.size()) - 1;
  std::vector<i64> cur(t->phi, 0);
  cur[0] = 1;
  for (int j = 0; j < n; ++j) {
    t->red.push_back(cur);
    // multiply by x and reduce by the monic P
    i64 top = cur[t->phi - 1];
    for (int i = t->phi - 1; i > 0; --i) cur[i] = cur[i - 1] - top * P[i];
    cur[0] = -top * P[0];
  }
  cache[n] = t;
  return t;
}

template <class C>
inline C cyc_zero() {
  return C(0);
}

/**
 * Element of Q(zeta_n) in the power basis 1, z, ..., z^{phi(n)-1}.
 *
 * The coefficient type is mpq_class for general use and i64 for hot loops
 * over algebraic integers.  Binary operations lift both operands to the lcm
 * of their conductors.
 */
template <class C>
class Cyclotomic {
 public:
  Cyclotomic() : n_(1), c_(1, C(0)) {}
  explicit Cyclotomic(C v, int n = 1) : n_(n) {
    c_.assign(cyc_table(n)->phi, C(0));
    c_[0] = v;
  }
  Cyclotomic(int n, std::vector<C> coeffs) : n_(n), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != cyc_table(n)->phi) throw InputError("coefficient vector has wrong length");
  }

  static Cyclotomic zeta(int n, i64 j = 1) {
    auto t = cyc_table(n);
    j %= n;
    if (j < 0) j += n;
    std::vector<C> c(t->phi);
    for (int i = 0; i < t->phi; ++i) c[i] = C(t->red[j][i]);
    return Cyclotomic(n, c);
  }

  int conductor() const { return n_; }
  const std::vector<C>& coeffs() const { return c_; }

  /// Same number viewed in Q(zeta_N), N a multiple of the conductor.
  Cyclotomic lift(int N) const {
    if (N == n_) return *this;
    if (N % n_) throw DivisibilityError("cannot lift to a non-multiple conductor");
    auto t = cyc_table(N);
    int s = N / n_;
    std::vector<C> out(t->phi, C(0));
    for (size_t j = 0; j < c_.size(); ++j) {
      if (c_[j] == 0) continue;
      const auto& r = t->red[(j * s) % N];
      for (int i = 0; i < t->phi; ++i)
        if (r[i]) out[i] += c_[j] * C(r[i]);
    }
    return Cyclotomic(N, out);
  }

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    int N = std::lcm(a.n_, b.n_);
    Cyclotomic x = a.lift(N), y = b.lift(N);
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
    return x;
  }
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
    int N = std::lcm(a.n_, b.n_);
    Cyclotomic x = a.lift(N), y = b.lift(N);
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
    return x;
  }
  Cyclotomic operator-() const {
    Cyclotomic x = *this;
    for (auto& c : x.c_) c = -c;
    return x;
  }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    int N = std::lcm(a.n_, b.n_);
    Cyclotomic x = a.lift(N), y = b.lift(N);
    auto t = cyc_table(N);
    std::vector<C> out(t->phi, C(0));
    for (int i = 0; i < t->phi; ++i) {
      if (x.c_[i] == 0) continue;
      for (int j = 0; j < t->phi; ++j) {
        if (y.c_[j] == 0) continue;
        C prod = x.c_[i] * y.c_[j];
        const auto& r = t->red[(i + j) % N];
        for (int k = 0; k < t->phi; ++k)
          if (r[k]) out[k] += prod * C(r[k]);
      }
    }
    return Cyclotomic(N, out);
  }
  friend Cyclotomic operator*(const Cyclotomic& a, const C& s) {
    Cyclotomic x = a;
    for (auto& c : x.c_) c *= s;
    return x;
  }
  Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
  Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
  Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

  /// In-place a += b * c without conductor promotion; all three must share n.
  void add_product(const Cyclotomic& b, const Cyclotomic& c) {
    auto t = cyc_table(n_);
    for (int i = 0; i < t->phi; ++i) {
      if (b.c_[i] == 0) continue;
      for (int j = 0; j < t->phi; ++j) {
        if (c.c_[j] == 0) continue;
        C prod = b.c_[i] * c.c_[j];
        const auto& r = t->red[(i + j) % n_];
        for (int k = 0; k < t->phi; ++k)
          if (r[k]) c_[k] += prod * C(r[k]);
      }
    }
  }

  /// sigma_t : zeta_n -> zeta_n^t, t coprime to n.
  Cyclotomic galois(i64 t) const {
    t %= n_;
    if (t < 0) t += n_;
    if (std::gcd(t, static_cast<i64>(n_)) != 1) throw InputError("Galois exponent not coprime to the conductor");
    auto tab = cyc_table(n_);
    std::vector<C> out(tab->phi, C(0));
    for (int j = 0; j < tab->phi; ++j) {
      if (c_[j] == 0) continue;
      const auto& r = tab->red[(j * t) % n_];
      for (int i = 0; i < tab->phi; ++i)
        if (r[i]) out[i] += c_[j] * C(r[i]);
    }
    return Cyclotomic(n_, out);
  }
  Cyclotomic conj() const { return galois(-1); }

  bool is_zero() const {
    for (auto& c : c_)
      if (c != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  C rational() const {
    if (!is_rational()) throw InputError("cyclotomic number is not rational");
    return c_[0];
  }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

  /// Lexicographic comparison of coefficient vectors in a common conductor.
  friend int compare(const Cyclotomic& a, const Cyclotomic& b) {
    int N = std::lcm(a.n_, b.n_);
    auto x = a.lift(N), y = b.lift(N);
    for (size_t i = 0; i < x.c_.size(); ++i) {
      if (x.c_[i] < y.c_[i]) return -1;
      if (y.c_[i] < x.c_[i]) return 1;
    }
    return 0;
  }

  std::complex<double> to_complex() const {
    std::complex<double> z = std::polar(1.0, 2.0 * M_PI / n_), r = 0, pw = 1;
    for (auto& c : c_) {
      r += to_double(c) * pw;
      pw *= z;
    }
    return r;
  }

 private:
  static double to_double(const mpq_class& q) { return q.get_d(); }
  static double to_double(i64 v) { return static_cast<double>(v); }

  int n_;
  std::vector<C> c_;
};

using CycNum = Cyclotomic<mpq_class>;

/// Canonical a/b.
inline mpq_class frac(i64 a, i64 b) {
  mpq_class q(static_cast<long>(a), static_cast<long>(b));
  q.canonicalize();
  return q;
}
using CycInt = Cyclotomic<i64>;

inline CycNum to_cycnum(const CycInt& a) {
  std::vector<mpq_class> c;
  for (i64 v : a.coeffs()) c.emplace_back(static_cast<long>(v));
  return CycNum(a.conductor(), c);
}

/// Exact conversion of an algebraic integer; throws if a coefficient is not integral.
inline CycInt to_cycint(const CycNum& a) {
  std::vector<i64> c;
  for (const auto& q : a.coeffs()) {
    if (q.get_den() != 1) throw InputError("cyclotomic number is not integral in the power basis");
    c.push_back(q.get_num().get_si());
  }
  return CycInt(a.conductor(), c);
}

inline CycNum operator/(const CycNum& a, const mpq_class& s) {
  if (s == 0) throw InputError("division by zero");
  return a * mpq_class(1 / s);
}

/// Multiplicative inverse through the norm: 1/a = prod_{t != 1} sigma_t(a) / N(a).
inline CycNum inverse(const CycNum& a) {
  if (a.is_zero()) throw InputError("inverse of zero");
  int n = a.conductor();
  CycNum prod(mpq_class(1), n);
  for (int t = 2; t < n; ++t)
    if (std::gcd(t, n) == 1) prod *= a.galois(t);
  CycNum norm = prod * a;
  return prod / norm.rational();
}

/// Expresses a in Q(zeta_m) for m dividing the conductor; throws
/// DivisibilityError when a is not in that subfield.
inline CycNum descend(const CycNum& a, int m) {
  int n = a.conductor();
  if (n % m) {
    int N = std::lcm(n, m);
    return descend(a.lift(N), m);
  }
  auto tn = cyc_table(n);
  int pm = cyc_table(m)->phi;
  int s = n / m;
  // columns: zeta_m^j in Q(zeta_n) coordinates, augmented with a
  int rows = tn->phi, cols = pm;
  std::vector<std::vector<mpq_class>> M(rows, std::vector<mpq_class>(cols + 1));
  for (int j = 0; j < cols; ++j) {
    const auto& r = tn->red[(j * s) % n];
    for (int i = 0; i < rows; ++i) M[i][j] = mpq_class(static_cast<long>(r[i]));
  }
  for (int i = 0; i < rows; ++i) M[i][cols] = a.coeffs()[i];
  std::vector<int> pivcol;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (M[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[r], M[piv]);
    mpq_class inv = 1 / M[r][c];
    for (auto& v : M[r]) v *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      mpq_class f = M[i][c];
      for (int k = 0; k <= cols; ++k) M[i][k] -= f * M[r][k];
    }
    pivcol.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (M[i][cols] != 0) throw DivisibilityError("value does not lie in Q(zeta_" + std::to_string(m) + ")");
  std::vector<mpq_class> out(pm, 0);
  for (int i = 0; i < r; ++i) out[pivcol[i]] = M[i][cols];
  return CycNum(m, out);
}

/// Smallest conductor m dividing n with a in Q(zeta_m).
inline CycNum minimal_form(const CycNum& a) {
  int n = a.conductor();
  for (int m = 1; m <= n; ++m) {
    if (n % m) continue;
    try {
      return descend(a, m);
    } catch (const DivisibilityError&) {
    }
  }
  return a;
}

inline std::string to_string(const CycNum& a) {
  std::string s;
  auto& c = a.coeffs();
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    std::string t = c[i].get_str();
    if (!s.empty()) s += (t[0] == '-') ? " " : " +";
    if (i == 0) s += t;
    else if (c[i] == 1) s += "z" + std::to_string(a.conductor()) + (i > 1 ? "^" + std::to_string(i) : "");
    else if (c[i] == -1) s += "-z" + std::to_string(a.conductor()) + (i > 1 ? "^" + std::to_string(i) : "");
    else s += t + "*z" + std::to_string(a.conductor()) + (i > 1 ? "^" + std::to_string(i) : "");
  }
  return s.empty() ? "0" : s;
}

}  // namespace kq
