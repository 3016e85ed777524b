#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <tuple>
#include <vector>

#include "kq/charring.hpp"
#include "kq/repring.hpp"

namespace kq {

/**
 * K_G(W) for a finite G-set W on the basis (orbit, irreducible character of
 * the stabilizer of the orbit's base point).  A bundle is known through its
 * stalk characters; the stalk at w = t w0 is t applied to the stalk at w0.
 */
class BundleSpace {
 public:
  struct Gen {
    int orbit = 0, irrep = 0;
  };

  BundleSpace(const Atlas& atlas, FiniteGSet W) : atlas_(&atlas), W_(std::move(W)) {
    N_ = atlas.group().exponent();
    for (int o = 0; o < W_.num_orbits(); ++o) {
      const SubgroupData& S = atlas.subgroup(W_.stabilizer(W_.orbit_reps()[o]));
      stab_.push_back(&S);
      first_.push_back(static_cast<int>(gens_.size()));
      for (int i = 0; i < S.table->size(); ++i) gens_.push_back({o, i});
      std::vector<std::vector<CycInt>> vals(S.table->size());
      for (int i = 0; i < S.table->size(); ++i)
        for (int c = 0; c < S.emb.group->num_classes(); ++c) vals[i].push_back(to_cycint(S.table->value(i, c).lift(N_)));
      std::vector<std::vector<CycInt>> cv = vals;
      for (auto& row : cv)
        for (auto& v : row) v = v.galois(-1);
      values_.push_back(std::move(vals));
      conj_values_.push_back(std::move(cv));
    }
    first_.push_back(static_cast<int>(gens_.size()));
  }

  const Atlas& atlas() const { return *atlas_; }
  const FiniteGroup& group() const { return atlas_->group(); }
  const FiniteGSet& gset() const { return W_; }
  int rank() const { return static_cast<int>(gens_.size()); }
  int conductor() const { return N_; }
  const Gen& gen(int i) const { return gens_[i]; }
  int first_gen(int orbit) const { return first_[orbit]; }
  int num_irreps(int orbit) const { return first_[orbit + 1] - first_[orbit]; }
  const SubgroupData& stabilizer(int orbit) const { return *stab_[orbit]; }
  int base_point(int orbit) const { return W_.orbit_reps()[orbit]; }

  /// Class of t^-1 s t in the base stabilizer, t w0 = w; -1 unless s fixes w.
  int stab_class(int w, int s) const {
    if (W_.act(s, w) != w) return -1;
    const FiniteGroup& G = group();
    int t = W_.transporter(w);
    int x = G.mul(G.mul(G.inv(t), s), t);
    const SubgroupData& S = *stab_[W_.orbit_of(w)];
    return S.emb.group->class_of(S.emb.from_parent[x]);
  }

  /// Character value of irreducible `irrep` of the base stabilizer of `orbit`, lifted to Q(zeta_N).
  const CycInt& table_value(int orbit, int irrep, int cls) const { return values_[orbit][irrep][cls]; }
  const CycInt& conj_table_value(int orbit, int irrep, int cls) const { return conj_values_[orbit][irrep][cls]; }

  /// trace(s | (b_i)_w)
  CycInt value(int i, int w, int s) const {
    const Gen& g = gens_[i];
    if (W_.orbit_of(w) != g.orbit) return CycInt(0, N_);
    int c = stab_class(w, s);
    if (c < 0) return CycInt(0, N_);
    return values_[g.orbit][g.irrep][c];
  }

  /// trace(s | E_w) for E = sum a_i b_i.
  CycInt value(const std::vector<i64>& a, int w, int s) const {
    CycInt out(0, N_);
    int o = W_.orbit_of(w), c = stab_class(w, s);
    if (c < 0) return out;
    for (int i = first_[o]; i < first_[o + 1]; ++i)
      if (a[i]) out += values_[o][gens_[i].irrep][c] * a[i];
    return out;
  }

  /// Coordinates of the class-function bundle f(w0, s) given on base points,
  /// (1/|S|) sum_{s in S} f(w0, s) conj(psi(s)), as cyclotomic numbers.
  template <class F>
  std::vector<CycNum> coordinates(F&& f) const {
    std::vector<CycNum> out(rank());
    for (int o = 0; o < W_.num_orbits(); ++o) {
      const SubgroupData& S = *stab_[o];
      int w0 = base_point(o);
      std::vector<CycNum> sum(num_irreps(o), CycNum(mpq_class(0), N_));
      for (int sl = 0; sl < S.emb.group->order(); ++sl) {
        CycNum v = f(w0, S.emb.to_parent[sl]);
        if (v.is_zero()) continue;
        int c = S.emb.group->class_of(sl);
        for (int i = 0; i < num_irreps(o); ++i) sum[i] += v * to_cycnum(values_[o][i][c]).conj();
      }
      for (int i = 0; i < num_irreps(o); ++i) out[first_[o] + i] = sum[i] * frac(1, S.emb.group->order());
    }
    return out;
  }

  /// Integer coordinates of a virtual bundle given by its stalk characters.
  template <class F>
  std::vector<i64> integral_coordinates(F&& f) const {
    std::vector<i64> out;
    for (auto& c : coordinates(std::forward<F>(f))) {
      if (!c.is_rational() || c.rational().get_den() != 1) throw InvariantViolation("stalk characters are not virtual characters");
      out.push_back(c.rational().get_num().get_si());
    }
    return out;
  }

 private:
  const Atlas* atlas_;
  FiniteGSet W_;
  int N_ = 1;
  std::vector<const SubgroupData*> stab_;
  std::vector<int> first_;
  std::vector<Gen> gens_;
  std::vector<std::vector<std::vector<CycInt>>> values_, conj_values_;
};

/// Morphisms X -> Y: bundles on Y x X, point (y, x) at y * |X| + x.
struct HomSpace {
  FiniteGSet X, Y;
  BundleSpace B;
  HomSpace(const Atlas& atlas, const FiniteGSet& X_, const FiniteGSet& Y_) : X(X_), Y(Y_), B(atlas, product(Y_, X_)) {}
  int point(int y, int x) const { return y * X.size() + x; }
  int rank() const { return B.rank(); }

  /// Identity of X (only when X == Y): trivial line on the diagonal.
  std::vector<i64> identity() const {
    if (!(X == Y)) throw InputError("identity needs equal source and target");
    std::vector<i64> id(rank(), 0);
    for (int r : X.orbit_reps()) {
      int o = B.gset().orbit_of(point(r, r));
      id[B.first_gen(o)] = 1;
      if (B.base_point(o) != point(r, r)) {
        // base points of diagonal orbits are diagonal since they are least in their orbit
        throw InvariantViolation("diagonal orbit has an off-diagonal base point");
      }
    }
    return id;
  }
};

struct IntSC {
  int j = 0, k = 0;
  i64 v = 0;
};

/**
 * Structure constants of convolution Hom(Y,Z) x Hom(X,Y) -> Hom(X,Z):
 * (F * E)_{(z,x)} at s is sum over y in Y^s of F_{(z,y)}(s) E_{(y,x)}(s).
 * Only base points of Z x X are evaluated, and the multiplicities are
 * checked to be integers.
 */
class Composition {
 public:
  Composition(const HomSpace& YZ, const HomSpace& XY, const HomSpace& XZ) : YZ_(&YZ), XY_(&XY), XZ_(&XZ) {
    if (!(YZ.X == XY.Y) || !(XY.X == XZ.X) || !(YZ.Y == XZ.Y)) throw InputError("morphism spaces are not composable");
    const FiniteGSet& Y = XY.Y;
    const BundleSpace &B1 = YZ.B, &B2 = XY.B, &B3 = XZ.B;
    const int N = B3.conductor();
    rows_.assign(B1.rank(), {});
    for (int o3 = 0; o3 < B3.gset().num_orbits(); ++o3) {
      int w3 = B3.base_point(o3);
      int z = w3 / XZ.X.size(), x = w3 % XZ.X.size();
      const SubgroupData& S3 = B3.stabilizer(o3);
      // (o1, o2) -> (c1, c2, c3) -> count
      std::map<std::pair<int, int>, std::map<std::tuple<int, int, int>, i64>> counts;
      for (int sl = 0; sl < S3.emb.group->order(); ++sl) {
        int s = S3.emb.to_parent[sl];
        int c3 = S3.emb.group->class_of(sl);
        for (int y = 0; y < Y.size(); ++y) {
          if (Y.act(s, y) != y) continue;
          int w1 = YZ.point(z, y), w2 = XY.point(y, x);
          int o1 = B1.gset().orbit_of(w1), o2 = B2.gset().orbit_of(w2);
          counts[{o1, o2}][{B1.stab_class(w1, s), B2.stab_class(w2, s), c3}]++;
        }
      }
      const i64 order3 = S3.emb.group->order();
      for (auto& [oo, cnt] : counts) {
        auto [o1, o2] = oo;
        for (int r1 = 0; r1 < B1.num_irreps(o1); ++r1)
          for (int r2 = 0; r2 < B2.num_irreps(o2); ++r2) {
            std::vector<CycInt> acc(B3.num_irreps(o3), CycInt(0, N));
            for (auto& [cc, n] : cnt) {
              auto [c1, c2, c3] = cc;
              CycInt v = B1.table_value(o1, r1, c1) * B2.table_value(o2, r2, c2) * n;
              for (int r3 = 0; r3 < B3.num_irreps(o3); ++r3) acc[r3].add_product(v, conj_value(B3, o3, r3, c3));
            }
            for (int r3 = 0; r3 < B3.num_irreps(o3); ++r3) {
              if (!acc[r3].is_rational() || acc[r3].rational() % order3)
                throw InvariantViolation("convolution multiplicity is not an integer");
              i64 m = acc[r3].rational() / order3;
              if (m)
                rows_[B1.first_gen(o1) + r1].push_back(
                    {B2.first_gen(o2) + r2, B3.first_gen(o3) + r3, m});
            }
          }
      }
    }
  }

  const std::vector<std::vector<IntSC>>& rows() const { return rows_; }

  std::vector<i64> compose(const std::vector<i64>& F, const std::vector<i64>& E) const {
    std::vector<i64> out(XZ_->rank(), 0);
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (!F[i]) continue;
      for (auto& e : rows_[i])
        if (E[e.j]) out[e.k] += F[i] * E[e.j] * e.v;
    }
    return out;
  }
  Vec compose(const Vec& F, const Vec& E) const {
    const ZqRing& R = F.empty() ? *E[0].ring : *F[0].ring;
    Vec out = zero_vec(R, XZ_->rank());
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (F[i].is_zero()) continue;
      for (auto& e : rows_[i])
        if (!E[e.j].is_zero()) out[e.k] += F[i] * E[e.j] * R.from_int(e.v);
    }
    return out;
  }

 private:
  static const CycInt& conj_value(const BundleSpace& B, int o, int r, int c) { return B.conj_table_value(o, r, c); }

  const HomSpace *YZ_, *XY_, *XZ_;
  std::vector<std::vector<IntSC>> rows_;
};

/// End(X) = K_G(X x X) tensor Z_q/p^k as a finite algebra.
struct EndAlgebra {
  std::shared_ptr<HomSpace> H;
  std::shared_ptr<Composition> comp;
  FinAlgebra A;
};

inline EndAlgebra end_algebra(const Atlas& atlas, const FiniteGSet& X, const ZqRing& R, bool check = true) {
  EndAlgebra E;
  E.H = std::make_shared<HomSpace>(atlas, X, X);
  E.comp = std::make_shared<Composition>(*E.H, *E.H, *E.H);
  std::vector<std::vector<SCEntry>> rows(E.H->rank());
  for (size_t i = 0; i < rows.size(); ++i)
    for (auto& e : E.comp->rows()[i]) rows[i].push_back({e.j, e.k, R.from_int(e.v)});
  Vec u = zero_vec(R, E.H->rank());
  auto id = E.H->identity();
  for (size_t i = 0; i < id.size(); ++i) u[i] = R.from_int(id[i]);
  E.A = FinAlgebra(R, E.H->rank(), std::move(rows), u, check);
  return E;
}

inline Vec to_vec(const ZqRing& R, const std::vector<i64>& a) {
  Vec v = zero_vec(R, static_cast<int>(a.size()));
  for (size_t i = 0; i < a.size(); ++i) v[i] = R.from_int(a[i]);
  return v;
}

// ----------------------------------------------------- components and traces

/// True when the p'-part of g lies in the class cls.
inline bool in_component(const FiniteGroup& G, int g, int cls, u64 p) {
  return G.class_of(p_decomposition(G, g, p).second) == cls;
}

/// Matrix of E -> e_C E on K_G(W) tensor Z_q (column i = e_C b_i).
inline Mat component_matrix(const BundleSpace& B, const ZqRing& R, int cls) {
  const FiniteGroup& G = B.group();
  if (G.classes()[cls].element_order % R.p() == 0) throw InputError("class is not of order prime to p");
  Mat M(R, B.rank(), B.rank());
  for (int i = 0; i < B.rank(); ++i) {
    auto co = B.coordinates([&](int w, int s) {
      if (B.gen(i).orbit != B.gset().orbit_of(w) || !in_component(G, s, cls, R.p())) return CycNum(mpq_class(0), 1);
      return to_cycnum(B.value(i, w, s));
    });
    for (int j = 0; j < B.rank(); ++j)
      if (!co[j].is_zero()) M(j, i) = embed_cyc_to_zq(co[j], R);
  }
  return M;
}

/// Lusztig's trace at g: the matrix trace(g | E_{(y,x)}) on Y^g x X^g.
inline std::vector<std::vector<CycNum>> lusztig_trace(const HomSpace& H, int g, const std::vector<i64>& E) {
  auto ys = H.Y.fixed_points(g), xs = H.X.fixed_points(g);
  std::vector<std::vector<CycNum>> M(ys.size(), std::vector<CycNum>(xs.size()));
  for (size_t a = 0; a < ys.size(); ++a)
    for (size_t b = 0; b < xs.size(); ++b) M[a][b] = to_cycnum(H.B.value(E, H.point(ys[a], xs[b]), g));
  return M;
}

/// trace_C at c on Z_q coordinates: a Z_q matrix on Y^c x X^c.
inline Mat trace_C(const HomSpace& H, int c, const Vec& E) {
  const ZqRing& R = *E[0].ring;
  if (H.B.group().element_order(c) % R.p() == 0) throw InputError("trace_C needs an element of order prime to p");
  auto ys = H.Y.fixed_points(c), xs = H.X.fixed_points(c);
  Mat M(R, static_cast<int>(ys.size()), static_cast<int>(xs.size()));
  std::map<std::tuple<int, int, int>, ZqElem> cache;
  auto embedded = [&](int o, int irrep, int cl) -> const ZqElem& {
    auto key = std::make_tuple(o, irrep, cl);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, embed_cyc_to_zq(to_cycnum(H.B.table_value(o, irrep, cl)), R)).first;
    return it->second;
  };
  for (size_t a = 0; a < ys.size(); ++a)
    for (size_t b = 0; b < xs.size(); ++b) {
      int w = H.point(ys[a], xs[b]);
      int o = H.B.gset().orbit_of(w);
      int cl = H.B.stab_class(w, c);
      ZqElem s = R.zero();
      for (int i = H.B.first_gen(o); i < H.B.first_gen(o + 1); ++i) {
        if (E[i].is_zero()) continue;
        s += E[i] * embedded(o, H.B.gen(i).irrep, cl);
      }
      M(static_cast<int>(a), static_cast<int>(b)) = s;
    }
  return M;
}

// --------------------------------------------------------- classical side

/**
 * End of the permutation module Z_q[X] for an H-set X: H-invariant matrices,
 * basis the orbitals (H-orbits on X x X) with (A_O)_{(z,x)} = [(z,x) in O].
 */
struct OrbitalAlgebra {
  FiniteGSet X;
  FiniteGSet XX;  // X x X, (z, x) at z * |X| + x
  FinAlgebra A;

  /// Coordinates of an H-invariant matrix; throws if it is not invariant.
  Vec coordinates(const Mat& M) const {
    int n = X.size();
    Vec v = zero_vec(*M.R, XX.num_orbits());
    for (int w = 0; w < n * n; ++w) {
      int o = XX.orbit_of(w);
      const ZqElem& m = M(w / n, w % n);
      if (XX.orbit_reps()[o] == w) v[o] = m;
    }
    for (int w = 0; w < n * n; ++w)
      if (M(w / n, w % n) != v[XX.orbit_of(w)]) throw InvariantViolation("matrix is not invariant under the group");
    return v;
  }
  Mat matrix(const Vec& v) const {
    int n = X.size();
    Mat M(*v.at(0).ring, n, n);
    for (int w = 0; w < n * n; ++w) M(w / n, w % n) = v[XX.orbit_of(w)];
    return M;
  }
};

inline OrbitalAlgebra orbital_algebra(const FiniteGSet& X, const ZqRing& R) {
  OrbitalAlgebra O{X, product(X, X), {}};
  const int n = X.size(), r = O.XX.num_orbits();
  std::vector<std::vector<SCEntry>> rows(r);
  // (A_a A_b)(z, x) = #{y : (z,y) in a, (y,x) in b}, read at base points
  std::vector<std::map<std::pair<int, int>, i64>> cnt(r);
  for (int c = 0; c < r; ++c) {
    int w = O.XX.orbit_reps()[c], z = w / n, x = w % n;
    for (int y = 0; y < n; ++y) cnt[c][{O.XX.orbit_of(z * n + y), O.XX.orbit_of(y * n + x)}]++;
  }
  for (int c = 0; c < r; ++c)
    for (auto& [ab, m] : cnt[c]) rows[ab.first].push_back({ab.second, c, R.from_int(m)});
  for (auto& row : rows) std::sort(row.begin(), row.end(), [](const SCEntry& a, const SCEntry& b) { return std::pair(a.j, a.k) < std::pair(b.j, b.k); });
  Vec u = zero_vec(R, r);
  for (int x = 0; x < n; ++x) u[O.XX.orbit_of(x * n + x)] = R.one();
  O.A = FinAlgebra(R, r, std::move(rows), u, true);
  return O;
}

/// Indecomposable summands of Z_q[X] as the primitive idempotents of its orbital algebra.
struct ClassicalDecomposition {
  std::shared_ptr<OrbitalAlgebra> O;
  Decomposition D;
  std::vector<int> ranks;  // Z_q-rank of each summand (trace of the idempotent matrix)
  int num_summands() const { return static_cast<int>(D.idempotents.size()); }
  int num_classes() const { return D.num_classes; }
};

inline ClassicalDecomposition classical_decompose(const FiniteGSet& X, const ZqRing& R, u64 seed = 0) {
  ClassicalDecomposition C;
  C.O = std::make_shared<OrbitalAlgebra>(orbital_algebra(X, R));
  C.D = decompose_corner(C.O->A, C.O->A.unit(), seed);
  const int n = X.size();
  for (auto& e : C.D.idempotents) {
    Mat M = C.O->matrix(e);
    ZqElem t = R.zero();
    for (int i = 0; i < n; ++i) t += M(i, i);
    C.ranks.push_back(static_cast<int>(t.c[0]));
  }
  return C;
}

/// Class of an idempotent of the orbital algebra among the classes of C; -1 if none.
inline int classical_label(const ClassicalDecomposition& C, const Vec& e) {
  IdempotentEngine eng(C.O->A, 0);
  Vec eb = reduce_vec(e, C.O->A.ring().residue());
  CornerInfo ci = eng.corner(eb);
  for (int c = 0; c < C.D.num_classes; ++c)
    if (eng.isomorphic(C.D.class_reps[c], ci)) return c;
  return -1;
}

// ------------------------------------------------------------ beta and B

/**
 * beta_X : e_C (K_G(X) tensor Z_q) -> e_1 (K_{Z(c)}(X^c) tensor Z_q),
 * E -> e_1 t_c(E restricted to X^c), with t_c(F)(x, s) = F(x, c s).
 * Column i of `matrix` is beta(e_C b_i).
 */
struct BetaMap {
  int c = 0, cls = 0;
  const SubgroupData* Z = nullptr;
  std::shared_ptr<Atlas> atlasZ;
  std::shared_ptr<BundleSpace> source, target;
  std::vector<int> fixed;  // parent points of X^c, in target order
  Mat matrix;              // target rank x source rank
  Mat eC, e1;              // component projections on source and target
};

inline BetaMap beta_map(const Atlas& atlas, const FiniteGSet& X, int cls, const ZqRing& R,
                        std::shared_ptr<BundleSpace> source = nullptr) {
  const FiniteGroup& G = atlas.group();
  BetaMap b;
  b.cls = cls;
  b.c = G.classes()[cls].representative;
  if (G.element_order(b.c) % R.p() == 0) throw InputError("class is not of order prime to p");
  b.Z = &atlas.subgroup(centralizer(G, b.c));
  b.atlasZ = std::make_shared<Atlas>(b.Z->emb.group);
  b.source = source ? source : std::make_shared<BundleSpace>(atlas, X);
  auto [Xc, pts] = X.fixed_points_as(b.Z->emb, b.c);
  b.fixed = pts;
  b.target = std::make_shared<BundleSpace>(*b.atlasZ, Xc);
  const BundleSpace &S = *b.source, &T = *b.target;
  b.matrix = Mat(R, T.rank(), S.rank());
  const u64 p = R.p();
  const FiniteGroup& H = *b.Z->emb.group;
  for (int i = 0; i < S.rank(); ++i) {
    auto co = T.coordinates([&](int xl, int sl) {
      if (!is_p_power(H.element_order(sl), p)) return CycNum(mpq_class(0), 1);
      int x = pts[xl], s = G.mul(b.c, b.Z->emb.to_parent[sl]);
      return to_cycnum(S.value(i, x, s));
    });
    for (int j = 0; j < T.rank(); ++j)
      if (!co[j].is_zero()) b.matrix(j, i) = embed_cyc_to_zq(co[j], R);
  }
  b.eC = component_matrix(S, R, cls);
  b.e1 = component_matrix(T, R, 0);
  return b;
}

inline Vec apply_beta(const BetaMap& b, const Vec& E) { return b.matrix.apply(E); }

struct Unimodularity {
  int source_rank = 0, target_rank = 0;
  bool unimodular = false;
};

/// beta restricted to e_C K is an isomorphism onto e_1 K: equal ranks and a
/// unit Smith form.
inline Unimodularity beta_unimodularity(const BetaMap& b) {
  Unimodularity u;
  const ZqRing& R = *b.matrix.R;
  auto src = image_zq(b.eC);
  auto tgt = image_zq(b.e1);
  u.source_rank = static_cast<int>(src.size());
  u.target_rank = static_cast<int>(tgt.size());
  if (u.source_rank != u.target_rank) return u;
  if (u.source_rank == 0) {
    u.unimodular = true;
    return u;
  }
  std::vector<Vec> img;
  for (auto& v : src) img.push_back(b.matrix.apply(v));
  auto vals = smith_valuations(R, b.target->rank(), img);
  u.unimodular = static_cast<int>(vals.size()) == u.target_rank &&
                 std::all_of(vals.begin(), vals.end(), [](int v) { return v == 0; });
  // the image must lie in the e_1 component
  if (u.unimodular)
    for (auto& v : img)
      if (b.e1.apply(v) != v) u.unimodular = false;
  return u;
}

/**
 * The functor B on morphisms X -> Y: beta for the G-set Y x X, landing in
 * Hom_{Z(c)}(X^c, Y^c).
 */
struct FunctorB {
  BetaMap beta;
  std::shared_ptr<HomSpace> target;  // Z(c)-morphisms X^c -> Y^c
};

inline FunctorB functor_B(const Atlas& atlas, const HomSpace& H, int cls, const ZqRing& R) {
  FunctorB F;
  // share the orbit/stalk layout of H
  F.beta = beta_map(atlas, H.B.gset(), cls, R, std::make_shared<BundleSpace>(H.B));
  const FiniteGroup& G = atlas.group();
  int c = F.beta.c;
  auto [Xc, xp] = H.X.fixed_points_as(F.beta.Z->emb, c);
  auto [Yc, yp] = H.Y.fixed_points_as(F.beta.Z->emb, c);
  (void)G;
  F.target = std::make_shared<HomSpace>(*F.beta.atlasZ, Xc, Yc);
  if (!(F.target->B.gset() == F.beta.target->gset())) throw InvariantViolation("fixed points of Y x X do not match Y^c x X^c");
  // the bundle spaces agree point for point, so their bases agree too
  return F;
}

/// trace_1 on the target: the rank matrix on Y^c x X^c.
inline Mat trace_one(const HomSpace& H, const Vec& E) { return trace_C(H, 0, E); }

// ---------------------------------------------------- decomposition of objects

/// A random change of basis with at most two entries per column in P and
/// P^-1: a signed permutation with unit scalars, then disjoint transvections.
struct BasisChange {
  std::vector<std::vector<std::pair<int, ZqElem>>> P, Pinv;  // columns
};

inline BasisChange random_basis_change(const ZqRing& R, int n, u64 seed) {
  Rng rng(seed);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  auto random_unit = [&]() {
    while (true) {
      ZqElem u = R.zero();
      for (int a = 0; a < R.f(); ++a) u.c[a] = rng.below(R.modulus());
      if (u.is_unit()) return u;
    }
  };
  // Q = signed permutation: b'_i = u_i b_{perm i}
  Mat P(R, n, n);
  for (int i = 0; i < n; ++i) P(perm[i], i) = random_unit();
  // transvections on disjoint pairs (2t, 2t+1): b'_{2t} += lambda b'_{2t+1}
  for (int t = 0; 2 * t + 1 < n; ++t) {
    ZqElem lam = R.from_int(static_cast<i64>(rng.below(R.modulus())));
    for (int r = 0; r < n; ++r) P(r, 2 * t) += lam * P(r, 2 * t + 1);
  }
  Mat Pi = inverse(P);
  BasisChange B;
  B.P.resize(n);
  B.Pinv.resize(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!P(i, j).is_zero()) B.P[j].push_back({i, P(i, j)});
      if (!Pi(i, j).is_zero()) B.Pinv[j].push_back({i, Pi(i, j)});
    }
  return B;
}

inline Vec apply_columns(const std::vector<std::vector<std::pair<int, ZqElem>>>& M, const Vec& v) {
  Vec out = zero_vec(*v[0].ring, static_cast<int>(v.size()));
  for (size_t j = 0; j < v.size(); ++j) {
    if (v[j].is_zero()) continue;
    for (auto& [i, a] : M[j]) out[i] += a * v[j];
  }
  return out;
}

/// The algebra A written in the basis given by the columns of P.
inline FinAlgebra change_basis(const FinAlgebra& A, const BasisChange& B) {
  const ZqRing& R = A.ring();
  const int n = A.rank();
  std::vector<Vec> cols(n);
  for (int i = 0; i < n; ++i) {
    cols[i] = zero_vec(R, n);
    for (auto& [r, a] : B.P[i]) cols[i][r] = a;
  }
  std::vector<std::vector<SCEntry>> rows(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec prod = A.mul(cols[i], cols[j]);
      if (is_zero(prod)) continue;
      Vec c = apply_columns(B.Pinv, prod);
      for (int k = 0; k < n; ++k)
        if (!c[k].is_zero()) rows[i].push_back({j, k, c[k]});
    }
  return FinAlgebra(R, n, std::move(rows), apply_columns(B.Pinv, A.unit()), false);
}

struct LabeledSummand {
  Vec idempotent;  // in End(Y) coordinates
  int cls = 0;     // p'-class C
  int label = -1;  // classical class of trace_C(idempotent) for Z_G(c) on Y^c
  int rank = 0;    // Z_q-rank of trace_C(idempotent)
};

struct ComponentDecomposition {
  int cls = 0;
  int num_classes = 0;                  // isomorphism classes in K P_C
  std::vector<LabeledSummand> summands;
  ClassicalDecomposition classical;     // Z_G(c) acting on Y^c
  bool labels_bijective = false;        // K-side classes <-> classical classes, multiplicities equal
};

/**
 * Decomposes e_C Y in the Karoubi completion.  Each primitive idempotent is
 * labeled through trace_C = trace_1 o B by its classical summand of Z_q[Y^c]
 * over Z_G(c).  With conj_seed != 0 the computation runs in a randomly
 * changed basis of End(Y) and the idempotents are carried back.
 */
inline ComponentDecomposition decompose_component(const Atlas& atlas, const EndAlgebra& End, int cls, u64 seed,
                                                  u64 conj_seed = 0, const ClassicalDecomposition* classical = nullptr) {
  const FiniteGroup& G = atlas.group();
  const FinAlgebra& A = End.A;
  const ZqRing& R = A.ring();
  ComponentDecomposition out;
  out.cls = cls;
  int c = G.classes()[cls].representative;
  const SubgroupData& Z = atlas.subgroup(centralizer(G, c));
  auto [Yc, pts] = End.H->X.fixed_points_as(Z.emb, c);
  (void)pts;
  if (classical)
    out.classical = *classical;
  else
    out.classical = classical_decompose(Yc, R, 0);

  Mat eC = component_matrix(End.H->B, R, cls);
  Vec eps = eC.apply(A.unit());
  std::vector<Vec> idems;
  std::vector<int> iso;
  if (conj_seed) {
    BasisChange Bc = random_basis_change(R, A.rank(), conj_seed);
    FinAlgebra A2 = change_basis(A, Bc);
    Decomposition D = decompose_corner(A2, apply_columns(Bc.Pinv, eps), seed);
    for (auto& e : D.idempotents) idems.push_back(apply_columns(Bc.P, e));
    iso = D.iso_class;
    out.num_classes = D.num_classes;
  } else {
    Decomposition D = decompose_corner(A, eps, seed);
    idems = D.idempotents;
    iso = D.iso_class;
    out.num_classes = D.num_classes;
  }
  for (auto& e : idems) {
    if (A.mul(e, e) != e) throw InvariantViolation("summand idempotent is not idempotent");
    LabeledSummand s;
    s.idempotent = e;
    s.cls = cls;
    Mat T = trace_C(*End.H, c, e);
    Vec t = out.classical.O->coordinates(T);
    ZqElem tr = R.zero();
    for (int i = 0; i < T.rows; ++i) tr += T(i, i);
    s.rank = static_cast<int>(tr.c[0]);
    if (out.classical.O->A.mul(t, t) != t) throw InvariantViolation("trace_C of an idempotent is not idempotent");
    s.label = classical_label(out.classical, t);
    out.summands.push_back(s);
  }
  // K-side classes must map injectively onto classical classes with equal multiplicities
  std::map<int, int> kclass_to_label;
  bool ok = true;
  for (size_t i = 0; i < idems.size(); ++i) {
    int l = out.summands[i].label;
    if (l < 0) ok = false;
    auto it = kclass_to_label.find(iso[i]);
    if (it == kclass_to_label.end())
      kclass_to_label[iso[i]] = l;
    else if (it->second != l)
      ok = false;
  }
  std::set<int> labels;
  for (auto& [k, l] : kclass_to_label) labels.insert(l);
  if (static_cast<int>(labels.size()) != out.num_classes || out.num_classes != out.classical.num_classes()) ok = false;
  std::vector<int> mk(out.classical.num_classes(), 0), mc(out.classical.num_classes(), 0);
  for (auto& s : out.summands)
    if (s.label >= 0) mk[s.label]++;
  for (int cl : out.classical.D.iso_class) mc[cl]++;
  if (mk != mc) ok = false;
  out.labels_bijective = ok;
  return out;
}

struct ObjectDecomposition {
  std::vector<ComponentDecomposition> components;
  int total_classes() const {
    int s = 0;
    for (auto& c : components) s += c.num_classes;
    return s;
  }
  int classical_total() const {
    int s = 0;
    for (auto& c : components) s += c.classical.num_classes();
    return s;
  }
  /// Sorted (C, label) multiset over all summands.
  std::vector<std::pair<int, int>> label_multiset() const {
    std::vector<std::pair<int, int>> m;
    for (auto& c : components)
      for (auto& s : c.summands) m.push_back({s.cls, s.label});
    std::sort(m.begin(), m.end());
    return m;
  }
};

/// All p'-components of an object Y.
inline ObjectDecomposition decompose_object(const Atlas& atlas, const EndAlgebra& End, u64 seed, u64 conj_seed = 0,
                                            const ObjectDecomposition* reuse_classical = nullptr) {
  ObjectDecomposition D;
  const u64 p = End.A.ring().p();
  auto cl = p_prime_classes(atlas.group(), p);
  for (size_t i = 0; i < cl.size(); ++i) {
    const ClassicalDecomposition* cd = reuse_classical ? &reuse_classical->components[i].classical : nullptr;
    D.components.push_back(decompose_component(atlas, End, cl[i], seed + i, conj_seed ? conj_seed + 977 * i : 0, cd));
  }
  return D;
}

// ------------------------------------------------------- Lusztig bookkeeping

/// sum over classes [g] of the number of Z_G(g)-orbits on X^g x X^g.
inline int lusztig_dimension(const Atlas& atlas, const FiniteGSet& X) {
  const FiniteGroup& G = atlas.group();
  int total = 0;
  for (int c = 0; c < G.num_classes(); ++c) {
    int g = G.classes()[c].representative;
    const SubgroupData& Z = atlas.subgroup(centralizer(G, g));
    auto [Xg, pts] = X.fixed_points_as(Z.emb, g);
    (void)pts;
    if (Xg.size() == 0) continue;
    total += product(Xg, Xg).num_orbits();
  }
  return total;
}

/// Rank of the joint Lusztig trace map over all classes on the basis of End(X).
inline int lusztig_joint_rank(const HomSpace& H) {
  const FiniteGroup& G = H.B.group();
  EllReducer red(H.B.conductor(), static_cast<u64>(G.order()));
  std::vector<std::vector<CycNum>> M;  // rows: (g, y, x); columns: basis
  for (int c = 0; c < G.num_classes(); ++c) {
    int g = G.classes()[c].representative;
    auto ys = H.Y.fixed_points(g), xs = H.X.fixed_points(g);
    for (int y : ys)
      for (int x : xs) {
        std::vector<CycNum> row(H.rank());
        for (int i = 0; i < H.rank(); ++i) row[i] = to_cycnum(H.B.value(i, H.point(y, x), g));
        M.push_back(std::move(row));
      }
  }
  return cyc_rank_mod_ell(M, red);
}

}  // namespace kq
