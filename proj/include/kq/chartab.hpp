#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "kq/cyclotomic.hpp"
#include "kq/group.hpp"
#include "kq/linalg.hpp"

namespace kq {

/// A class function, one value per conjugacy class.
using ClassFunction = std::vector<CycNum>;

/**
 * Ordinary character table, computed by Dixon-Schneider over F_ell and
 * lifted to Q(zeta_e), e = exp(G), by eigenvalue multiplicities.
 *
 * Rows: trivial character first, then by degree, then lexicographically on
 * the coefficient vectors of the values in class order.
 */
class CharacterTable {
 public:
  explicit CharacterTable(GroupPtr G) : G_(std::move(G)) { compute(); }

  const FiniteGroup& group() const { return *G_; }
  const GroupPtr& group_ptr() const { return G_; }
  int size() const { return static_cast<int>(rows_.size()); }
  int conductor() const { return e_; }
  u64 ell() const { return ell_; }
  const ClassFunction& row(int chi) const { return rows_[chi]; }
  const CycNum& value(int chi, int cls) const { return rows_[chi][cls]; }
  const CycNum& at(int chi, int g) const { return rows_[chi][G_->class_of(g)]; }
  int degree(int chi) const { return degrees_[chi]; }

 private:
  void compute() {
    const FiniteGroup& G = *G_;
    int k = G.num_classes();
    int n = G.order();
    e_ = G.exponent();
    // least prime ell = 1 mod e, ell > 2 sqrt|G|, ell not dividing |G|
    u64 ell = e_ + 1;
    while (!(is_prime(ell) && ell * ell > 4ull * n && n % ell != 0)) ell += e_;
    ell_ = ell;

    std::vector<int> inv_class(k);
    for (int c = 0; c < k; ++c) inv_class[c] = G.class_of(G.inv(G.classes()[c].representative));

    // a[j][i][l] = #{(x, y) in C_j x C_i : x y = z_l}
    std::vector<std::vector<std::vector<u64>>> a(k, std::vector<std::vector<u64>>(k, std::vector<u64>(k, 0)));
    for (int l = 0; l < k; ++l) {
      int z = G.classes()[l].representative;
      for (int x = 0; x < n; ++x) {
        int y = G.mul(G.inv(x), z);
        a[G.class_of(x)][G.class_of(y)][l]++;
      }
    }

    // common eigenvectors of A_j, (A_j)_{il} = a[j][i][l]
    std::vector<std::vector<std::vector<u64>>> spaces;  // list of column bases
    {
      std::vector<std::vector<u64>> basis;
      for (int i = 0; i < k; ++i) {
        std::vector<u64> v(k, 0);
        v[i] = 1;
        basis.push_back(v);
      }
      spaces.push_back(basis);
    }
    for (int j = 0; j < k; ++j) {
      bool all_one = std::all_of(spaces.begin(), spaces.end(), [](auto& s) { return s.size() == 1; });
      if (all_one) break;
      std::vector<std::vector<std::vector<u64>>> next;
      for (auto& W : spaces) {
        if (W.size() == 1) {
          next.push_back(W);
          continue;
        }
        int d = static_cast<int>(W.size());
        // images A_j w, expressed in the basis W
        std::vector<std::vector<u64>> img(d, std::vector<u64>(k, 0));
        for (int t = 0; t < d; ++t)
          for (int i = 0; i < k; ++i) {
            u64 s = 0;
            for (int l = 0; l < k; ++l) s = (s + (a[j][i][l] % ell) * W[t][l]) % ell;
            img[t][i] = s;
          }
        auto M = coords_in(W, img, ell);  // M[t] = coords of A_j w_t
        // eigenspaces of M (d x d, column t = M[t])
        int got = 0;
        for (u64 lam = 0; lam < ell && got < d; ++lam) {
          ModMat B(d, std::vector<u64>(d, 0));
          for (int r = 0; r < d; ++r)
            for (int t = 0; t < d; ++t) B[r][t] = (M[t][r] + (r == t ? ell - lam : 0)) % ell;
          auto ker = nullspace_mod_ell(B, d, ell);
          if (ker.empty()) continue;
          std::vector<std::vector<u64>> sub;
          for (auto& c : ker) {
            std::vector<u64> v(k, 0);
            for (int t = 0; t < d; ++t)
              for (int i = 0; i < k; ++i) v[i] = (v[i] + c[t] * W[t][i]) % ell;
            sub.push_back(v);
          }
          got += static_cast<int>(sub.size());
          next.push_back(sub);
        }
        if (got != d) throw InvariantViolation("class matrix not diagonalizable modulo ell");
      }
      spaces = std::move(next);
    }
    for (auto& s : spaces)
      if (s.size() != 1) throw InvariantViolation("class matrices do not separate characters");

    // roots of unity modulo ell matched with zeta_e
    u64 z = powmod(primitive_root(ell), (ell - 1) / e_, ell);
    for (auto& s : spaces) {
      std::vector<u64> w = s[0];
      u64 w0 = w[0] % ell;  // identity class is class 0
      if (!w0) throw InvariantViolation("central character vanishes at the identity");
      u64 w0i = invmod(w0, ell);
      for (auto& x : w) x = mulmod(x, w0i, ell);
      // d^2 = |G| / sum_l w_l w_{l*} / |C_l|
      u64 sum = 0;
      for (int l = 0; l < k; ++l)
        sum = (sum + mulmod(mulmod(w[l], w[inv_class[l]], ell), invmod(G.classes()[l].size() % ell, ell), ell)) % ell;
      u64 d2 = mulmod(n % ell, invmod(sum, ell), ell);
      u64 d = 0;
      for (u64 t = 1; t * t <= static_cast<u64>(n); ++t)
        if (t * t % ell == d2) d = t;
      if (!d) throw InvariantViolation("degree recovery failed");
      std::vector<u64> chi(k);
      for (int l = 0; l < k; ++l) chi[l] = mulmod(mulmod(d, w[l], ell), invmod(G.classes()[l].size() % ell, ell), ell);
      ClassFunction row(k);
      for (int l = 0; l < k; ++l) {
        int o = G.classes()[l].element_order;
        u64 zo = powmod(z, e_ / o, ell);
        u64 oinv = invmod(o % ell, ell);
        CycNum val(mpq_class(0), e_);
        u64 total = 0;
        for (int jj = 0; jj < o; ++jj) {
          u64 s = 0;
          for (int i = 0; i < o; ++i) {
            u64 ci = chi[G.power_class(l, i)];
            s = (s + mulmod(ci, powmod(zo, (o - (static_cast<u64>(i) * jj) % o) % o, ell), ell)) % ell;
          }
          u64 mj = mulmod(s, oinv, ell);
          if (mj > d) throw InvariantViolation("eigenvalue multiplicity out of range");
          total += mj;
          if (mj) val += CycNum::zeta(e_, static_cast<i64>(jj) * (e_ / o)) * mpq_class(static_cast<long>(mj));
        }
        if (total != d) throw InvariantViolation("eigenvalue multiplicities do not sum to the degree");
        row[l] = val;
      }
      rows_.push_back(row);
      degrees_.push_back(static_cast<int>(d));
    }
    std::vector<int> idx(rows_.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    auto is_trivial = [&](int i) {
      for (auto& v : rows_[i])
        if (v != CycNum(mpq_class(1))) return false;
      return true;
    };
    std::sort(idx.begin(), idx.end(), [&](int x, int y) {
      bool tx = is_trivial(x), ty = is_trivial(y);
      if (tx != ty) return tx;
      if (degrees_[x] != degrees_[y]) return degrees_[x] < degrees_[y];
      for (int l = 0; l < k; ++l) {
        int c = compare(rows_[x][l], rows_[y][l]);
        if (c) return c < 0;
      }
      return false;
    });
    std::vector<ClassFunction> r2;
    std::vector<int> d2v;
    for (int i : idx) {
      r2.push_back(rows_[i]);
      d2v.push_back(degrees_[i]);
    }
    rows_ = std::move(r2);
    degrees_ = std::move(d2v);
    if (static_cast<int>(rows_.size()) != k) throw InvariantViolation("wrong number of irreducible characters");
  }

  /// Coordinates of each vector of `img` in the column basis W (mod ell).
  static std::vector<std::vector<u64>> coords_in(const std::vector<std::vector<u64>>& W,
                                                 const std::vector<std::vector<u64>>& img, u64 ell) {
    int d = static_cast<int>(W.size());
    int k = static_cast<int>(W[0].size());
    std::vector<std::vector<u64>> out;
    for (auto& v : img) {
      ModMat aug(k, std::vector<u64>(d + 1, 0));
      for (int i = 0; i < k; ++i) {
        for (int t = 0; t < d; ++t) aug[i][t] = W[t][i];
        aug[i][d] = (ell - v[i] % ell) % ell;
      }
      auto ker = nullspace_mod_ell(aug, d + 1, ell);
      std::vector<u64> c;
      for (auto& kv : ker)
        if (kv[d] % ell) {
          u64 inv = invmod(kv[d] % ell, ell);
          for (int t = 0; t < d; ++t) c.push_back(mulmod(kv[t], inv, ell));
          break;
        }
      if (static_cast<int>(c.size()) != d) throw InvariantViolation("subspace not invariant under a class matrix");
      out.push_back(c);
    }
    return out;
  }

  GroupPtr G_;
  int e_ = 1;
  u64 ell_ = 2;
  std::vector<ClassFunction> rows_;
  std::vector<int> degrees_;
};

using TablePtr = std::shared_ptr<const CharacterTable>;

inline CycNum inner_product(const FiniteGroup& G, const ClassFunction& f, const ClassFunction& g) {
  CycNum s;
  for (int c = 0; c < G.num_classes(); ++c) s += f[c] * g[c].conj() * mpq_class(G.classes()[c].size());
  return s * frac(1, G.order());
}

/// Multiplicities of the irreducible characters in f.
inline std::vector<mpq_class> decompose(const CharacterTable& T, const ClassFunction& f) {
  std::vector<mpq_class> m;
  for (int i = 0; i < T.size(); ++i) {
    CycNum ip = inner_product(T.group(), f, T.row(i));
    m.push_back(ip.rational());
  }
  return m;
}

inline std::vector<i64> decompose_integral(const CharacterTable& T, const ClassFunction& f) {
  std::vector<i64> out;
  for (auto& q : decompose(T, f)) {
    if (q.get_den() != 1) throw InvariantViolation("class function is not a virtual character");
    out.push_back(q.get_num().get_si());
  }
  return out;
}

/// Restriction to an embedded subgroup.
inline ClassFunction restrict_cf(const FiniteGroup& G, const ClassFunction& f, const EmbeddedGroup& H) {
  ClassFunction r;
  for (auto& cc : H.group->classes()) r.push_back(f[G.class_of(H.to_parent[cc.representative])]);
  return r;
}

/// Frobenius induction from an embedded subgroup.
inline ClassFunction induce_cf(const FiniteGroup& G, const EmbeddedGroup& H, const ClassFunction& f) {
  ClassFunction r(G.num_classes());
  for (int c = 0; c < G.num_classes(); ++c) {
    int g = G.classes()[c].representative;
    CycNum s;
    for (int x = 0; x < G.order(); ++x) {
      int y = H.from_parent[G.conj(G.inv(x), g)];
      if (y >= 0) s += f[H.group->class_of(y)];
    }
    r[c] = s * frac(1, H.group->order());
  }
  return r;
}

inline ClassFunction product_cf(const ClassFunction& a, const ClassFunction& b) {
  ClassFunction r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
  return r;
}

/// Tables of subgroups, computed once per subgroup and shared.
struct SubgroupData {
  Subgroup sub;
  EmbeddedGroup emb;
  TablePtr table;
};

/**
 * A group together with its character table and a memo of subgroup tables.
 * Not thread-safe.
 */
class Atlas {
 public:
  explicit Atlas(GroupPtr G) : G_(std::move(G)), T_(std::make_shared<CharacterTable>(G_)) {}
  const FiniteGroup& group() const { return *G_; }
  const GroupPtr& group_ptr() const { return G_; }
  const CharacterTable& table() const { return *T_; }
  const TablePtr& table_ptr() const { return T_; }

  const SubgroupData& subgroup(const Subgroup& H) const {
    auto it = cache_.find(H.members);
    if (it != cache_.end()) return *it->second;
    auto d = std::make_shared<SubgroupData>();
    d->sub = H;
    d->emb = as_group(*G_, H);
    d->table = std::make_shared<CharacterTable>(d->emb.group);
    cache_[H.members] = d;
    return *d;
  }

 private:
  GroupPtr G_;
  TablePtr T_;
  mutable std::map<std::vector<int>, std::shared_ptr<SubgroupData>> cache_;
};

}  // namespace kq
