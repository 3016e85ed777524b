#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kq/error.hpp"

namespace kq {

/// Exponent vector; every variable has degree 1.
using Monomial = std::vector<int>;

inline int mono_degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

/// Graded lex: higher total degree first, then lexicographically larger.
struct GrLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

/**
 * Polynomial over F_2 in v variables: the set of monomials with coefficient 1,
 * kept in graded lex order (leading term first).
 */
class F2Poly {
 public:
  explicit F2Poly(int vars = 3) : v_(vars) {}
  static F2Poly monomial(const Monomial& m) {
    F2Poly p(static_cast<int>(m.size()));
    p.terms_.insert(m);
    return p;
  }
  static F2Poly one(int vars) { return monomial(Monomial(vars, 0)); }
  static F2Poly var(int vars, int i) {
    Monomial m(vars, 0);
    m.at(i) = 1;
    return monomial(m);
  }

  int vars() const { return v_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  const std::set<Monomial, GrLexGreater>& terms() const { return terms_; }
  const Monomial& leading() const {
    if (terms_.empty()) throw InputError("zero polynomial has no leading term");
    return *terms_.begin();
  }
  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = mono_degree(*terms_.begin());
    for (auto& m : terms_)
      if (mono_degree(m) != d) return false;
    return true;
  }
  int degree() const { return terms_.empty() ? -1 : mono_degree(*terms_.begin()); }

  void toggle(const Monomial& m) {
    auto it = terms_.find(m);
    if (it == terms_.end())
      terms_.insert(m);
    else
      terms_.erase(it);
  }

  friend F2Poly operator+(F2Poly a, const F2Poly& b) {
    for (auto& m : b.terms_) a.toggle(m);
    return a;
  }
  friend F2Poly operator*(const F2Poly& a, const F2Poly& b) {
    F2Poly r(std::max(a.v_, b.v_));
    for (auto& x : a.terms_)
      for (auto& y : b.terms_) {
        Monomial m(r.v_, 0);
        for (size_t i = 0; i < x.size(); ++i) m[i] += x[i];
        for (size_t i = 0; i < y.size(); ++i) m[i] += y[i];
        r.toggle(m);
      }
    return r;
  }
  F2Poly pow(int e) const {
    F2Poly r = one(v_);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }
  bool operator==(const F2Poly& o) const { return terms_ == o.terms_; }
  bool operator!=(const F2Poly& o) const { return !(*this == o); }
  bool operator<(const F2Poly& o) const {
    return std::lexicographical_compare(terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end(), GrLexGreater());
  }

  std::string str() const {
    static const char* names = "xyzwuvst";
    if (terms_.empty()) return "0";
    std::string s;
    for (auto& m : terms_) {
      if (!s.empty()) s += " + ";
      std::string t;
      for (size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!t.empty()) t += "*";
        t += i < 8 ? std::string(1, names[i]) : "x" + std::to_string(i);
        if (m[i] > 1) t += "^" + std::to_string(m[i]);
      }
      s += t.empty() ? "1" : t;
    }
    return s;
  }

 private:
  int v_;
  std::set<Monomial, GrLexGreater> terms_;
};

/// C(n, k) mod 2 (Lucas: k's bits inside n's).
inline bool binom_odd(int n, int k) { return k >= 0 && k <= n && (k & ~n) == 0; }

/// Sq^k of a monomial from the total square Sq(x) = x + x^2 and Cartan:
/// Sq^k(x^a ...) = sum over j_1 + ... = k of prod C(a_i, j_i) x^{a+j}.
inline F2Poly sq_monomial(int k, const Monomial& m) {
  F2Poly out(static_cast<int>(m.size()));
  Monomial j(m.size(), 0);
  // enumerate splits of k with 0 <= j_i <= a_i
  auto rec = [&](auto&& self, size_t i, int left) -> void {
    if (i == m.size()) {
      if (left) return;
      Monomial r(m.size());
      for (size_t t = 0; t < m.size(); ++t) r[t] = m[t] + j[t];
      out.toggle(r);
      return;
    }
    for (int x = 0; x <= std::min(left, m[i]); ++x) {
      if (!binom_odd(m[i], x)) continue;
      j[i] = x;
      self(self, i + 1, left - x);
    }
    j[i] = 0;
  };
  rec(rec, 0, k);
  return out;
}

inline F2Poly sq(int k, const F2Poly& f) {
  if (k < 0) throw InputError("Steenrod square index must be nonnegative");
  F2Poly out(f.vars());
  for (auto& m : f.terms()) out = out + sq_monomial(k, m);
  return out;
}

/// Sq^3 through the Adem relation Sq^1 Sq^2 = Sq^3.
inline F2Poly sq3_adem(const F2Poly& f) { return sq(1, sq(2, f)); }

struct Division {
  bool divides = false;
  F2Poly quotient, remainder;
};

/// Division of g by f in graded lex order; f | g iff the remainder is zero.
inline Division divide(const F2Poly& f, const F2Poly& g) {
  if (f.is_zero()) throw InputError("division by the zero polynomial");
  int v = std::max(f.vars(), g.vars());
  Division d{false, F2Poly(v), F2Poly(v)};
  const Monomial& lf = f.leading();
  F2Poly rest = g;
  while (!rest.is_zero()) {
    Monomial lt = rest.leading();
    bool div = true;
    Monomial q(lt.size(), 0);
    for (size_t i = 0; i < lt.size(); ++i) {
      int e = i < lf.size() ? lf[i] : 0;
      if (lt[i] < e) {
        div = false;
        break;
      }
      q[i] = lt[i] - e;
    }
    if (div) {
      F2Poly qm = F2Poly::monomial(q);
      d.quotient = d.quotient + qm;
      rest = rest + qm * f;
    } else {
      F2Poly lm = F2Poly::monomial(lt);
      d.remainder = d.remainder + lm;
      rest = rest + lm;
    }
  }
  d.divides = d.remainder.is_zero();
  return d;
}

inline bool divides(const F2Poly& f, const F2Poly& g, F2Poly* quotient = nullptr) {
  Division d = divide(f, g);
  if (d.divides && quotient) *quotient = d.quotient;
  return d.divides;
}

struct CarlssonResult {
  bool sq1_zero = false;
  bool sq3_divisible = false;
  F2Poly sq1, sq3;
};

/// The two conditions: Sq^1 f = 0 and f | Sq^3 f.  Sq^1 f = 0 with f not
/// dividing Sq^3 f rules out a realization.
inline CarlssonResult carlsson_check(const F2Poly& f) {
  if (!f.is_homogeneous()) throw InputError("polynomial must be homogeneous");
  if (f.is_zero()) throw InputError("polynomial must be nonzero");
  CarlssonResult r;
  r.sq1 = sq(1, f);
  r.sq3 = sq(3, f);
  if (r.sq3 != sq3_adem(f)) throw InvariantViolation("Sq^3 disagrees with Sq^1 Sq^2");
  r.sq1_zero = r.sq1.is_zero();
  r.sq3_divisible = divides(f, r.sq3);
  return r;
}

/// All monomials of the given degree in descending graded lex order.
inline std::vector<Monomial> monomials_of_degree(int vars, int degree) {
  std::vector<Monomial> out;
  Monomial m(vars, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == vars - 1) {
      m[i] = left;
      out.push_back(m);
      return;
    }
    for (int e = left; e >= 0; --e) {
      m[i] = e;
      self(self, i + 1, left - e);
    }
  };
  if (vars == 0) {
    if (degree == 0) out.push_back(m);
    return out;
  }
  rec(rec, 0, degree);
  return out;
}

/**
 * Every nonzero homogeneous f of the given degree with Sq^1 f = 0 and
 * f not dividing Sq^3 f.  Sq^1 is linear, so the search runs over a basis
 * of its kernel.
 */
inline std::vector<F2Poly> search_candidates(int vars, int degree) {
  if (vars < 1 || vars > 3 || degree < 0 || degree > 6) throw InputError("search needs 1 <= vars <= 3 and 0 <= degree <= 6");
  auto mons = monomials_of_degree(vars, degree);
  auto targets = monomials_of_degree(vars, degree + 1);
  const int n = static_cast<int>(mons.size()), t = static_cast<int>(targets.size());
  // Sq^1 as an F_2 matrix, columns the source monomials (rows as bitmasks)
  std::vector<std::uint64_t> col(n, 0);
  for (int j = 0; j < n; ++j) {
    F2Poly image = sq_monomial(1, mons[j]);
    for (auto& m : image.terms())
      col[j] |= 1ull << (std::find(targets.begin(), targets.end(), m) - targets.begin());
  }
  if (t > 64) throw InputError("too many monomials for the bitmask search");
  // kernel: Gaussian elimination on the columns, tracking combinations
  std::vector<std::uint64_t> img = col, comb(n);
  for (int j = 0; j < n; ++j) comb[j] = 1ull << j;
  std::vector<std::uint64_t> kernel;
  std::vector<int> pivot_of;  // index of the column owning each pivot bit
  std::vector<std::uint64_t> pb;  // pivot bits
  for (int j = 0; j < n; ++j) {
    for (size_t r = 0; r < pb.size(); ++r)
      if (img[j] & pb[r]) {
        img[j] ^= img[pivot_of[r]];
        comb[j] ^= comb[pivot_of[r]];
      }
    if (img[j] == 0)
      kernel.push_back(comb[j]);
    else {
      pivot_of.push_back(j);
      pb.push_back(img[j] & (~img[j] + 1));
    }
  }
  std::vector<F2Poly> out;
  const std::uint64_t total = 1ull << kernel.size();
  for (std::uint64_t s = 1; s < total; ++s) {
    std::uint64_t mask = 0;
    for (size_t i = 0; i < kernel.size(); ++i)
      if (s >> i & 1) mask ^= kernel[i];
    F2Poly f(vars);
    for (int j = 0; j < n; ++j)
      if (mask >> j & 1) f.toggle(mons[j]);
    if (!sq(1, f).is_zero()) throw InvariantViolation("kernel element of Sq^1 has nonzero Sq^1");
    if (!divides(f, sq(3, f))) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Same polynomial after permuting the variables.
inline F2Poly permute_vars(const F2Poly& f, const std::vector<int>& perm) {
  F2Poly out(f.vars());
  for (auto& m : f.terms()) {
    Monomial r(m.size());
    for (size_t i = 0; i < m.size(); ++i) r[perm[i]] = m[i];
    out.toggle(r);
  }
  return out;
}

// ------------------------------------------------------------------ parser

/**
 * Polynomial grammar: sums of products of factors, factor = base [^ n],
 * base = variable x, y or z | integer (mod 2) | ( expr ).  Juxtaposition is
 * not multiplication.
 */
class PolyParser {
 public:
  explicit PolyParser(std::string s, int vars = 3) : s_(std::move(s)), v_(vars) {}
  F2Poly parse() {
    F2Poly r = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("polynomial parse error at position " + std::to_string(i_) + ": " + what);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  F2Poly expr() {
    F2Poly r = term();
    while (eat('+') || eat('-')) r = r + term();
    return r;
  }
  F2Poly term() {
    F2Poly r = factor();
    while (eat('*')) r = r * factor();
    return r;
  }
  F2Poly factor() {
    F2Poly b = base();
    if (eat('^')) {
      long e = integer();
      if (e > 64) fail("exponent too large");
      b = b.pow(static_cast<int>(e));
    }
    return b;
  }
  long integer() {
    skip();
    size_t st = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (st == i_) fail("expected an integer");
    if (i_ - st > 9) fail("integer too long");
    return std::stol(s_.substr(st, i_ - st));
  }
  F2Poly base() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      F2Poly r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return integer() % 2 ? F2Poly::one(v_) : F2Poly(v_);
    static const std::string names = "xyz";
    auto pos = names.find(c);
    if (pos != std::string::npos && static_cast<int>(pos) < v_) {
      ++i_;
      return F2Poly::var(v_, static_cast<int>(pos));
    }
    fail(std::string("unknown symbol '") + c + "'");
  }

  std::string s_;
  size_t i_ = 0;
  int v_;
};

inline F2Poly parse_poly(const std::string& s, int vars = 3) { return PolyParser(s, vars).parse(); }

}  // namespace kq
