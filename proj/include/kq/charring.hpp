#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "kq/repring.hpp"

namespace kq {

/// Reduction Z[1/d][zeta_N] -> F_ell with zeta_N -> w, ell = 1 mod N.
class EllReducer {
 public:
  EllReducer(int N, u64 avoid) : N_(N) {
    for (u64 t = 1;; ++t) {
      u64 ell = t * static_cast<u64>(N) + 1;
      if (ell > 100 && is_prime(ell) && avoid % ell) {
        ell_ = ell;
        break;
      }
    }
    u64 g = primitive_root(ell_);
    w_ = powmod(g, (ell_ - 1) / N_, ell_);
    wp_.resize(N_);
    for (int j = 0; j < N_; ++j) wp_[j] = powmod(w_, j, ell_);
  }
  u64 ell() const { return ell_; }
  u64 operator()(const CycNum& a) const {
    CycNum b = a.lift(N_);
    u64 s = 0;
    for (size_t j = 0; j < b.coeffs().size(); ++j) {
      const mpq_class& c = b.coeffs()[j];
      if (c == 0) continue;
      u64 num = mpz_fdiv_ui(c.get_num().get_mpz_t(), ell_);
      u64 den = mpz_fdiv_ui(c.get_den().get_mpz_t(), ell_);
      s = (s + mulmod(mulmod(num, invmod(den, ell_), ell_), wp_[j], ell_)) % ell_;
    }
    return s;
  }

 private:
  int N_;
  u64 ell_ = 0, w_ = 0;
  std::vector<u64> wp_;
};

/// Centralizer of a class representative with its table.
struct CentralizerData {
  int cls = 0;
  int rep = 0;
  const SubgroupData* data = nullptr;
  int class_in(int x) const { return data->emb.group->class_of(data->emb.from_parent[x]); }
};

/**
 * Commuting pairs (s, x) with s in a chosen family of classes, indexed up to
 * simultaneous conjugation.  Each s is moved to its class representative u
 * and x to the least element of its Z_G(u)-class.
 */
class PairIndex {
 public:
  PairIndex(const Atlas& atlas, const std::vector<int>& classes) : atlas_(&atlas) {
    const FiniteGroup& G = atlas.group();
    slot_.assign(G.num_classes(), -1);
    for (int c : classes) {
      CentralizerData cd;
      cd.cls = c;
      cd.rep = G.classes()[c].representative;
      cd.data = &atlas.subgroup(centralizer(G, cd.rep));
      slot_[c] = static_cast<int>(cents_.size());
      cents_.push_back(cd);
    }
    transporter_.assign(G.order(), -1);
    for (int s = 0; s < G.order(); ++s) {
      int c = G.class_of(s);
      if (slot_[c] < 0) continue;
      int u = G.classes()[c].representative;
      for (int y = 0; y < G.order(); ++y)
        if (G.conj(y, s) == u) {
          transporter_[s] = y;
          break;
        }
    }
    index_.resize(cents_.size());
    for (size_t k = 0; k < cents_.size(); ++k) {
      auto& cd = cents_[k];
      index_[k].assign(G.order(), -1);
      for (int x : cd.data->sub.members) {
        if (index_[k][x] >= 0) continue;
        int best = x;
        std::vector<int> orb;
        for (int z : cd.data->sub.members) orb.push_back(G.conj(z, x));
        for (int y : orb) best = std::min(best, y);
        int id = -1;
        auto it = by_pair_.find({cd.rep, best});
        if (it == by_pair_.end()) {
          id = static_cast<int>(pairs_.size());
          pairs_.push_back({cd.rep, best, cd.cls});
          by_pair_[{cd.rep, best}] = id;
        } else {
          id = it->second;
        }
        for (int y : orb) index_[k][y] = id;
      }
    }
    // canonical order: by class of u, then by least element g
    std::vector<int> perm(pairs_.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
      return std::pair(pairs_[a].u_class, pairs_[a].g) < std::pair(pairs_[b].u_class, pairs_[b].g);
    });
    std::vector<int> inv(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    std::vector<CommutingPair> sorted;
    for (int i : perm) sorted.push_back(pairs_[i]);
    pairs_ = sorted;
    for (auto& row : index_)
      for (auto& v : row)
        if (v >= 0) v = inv[v];
  }

  int size() const { return static_cast<int>(pairs_.size()); }
  const std::vector<CommutingPair>& pairs() const { return pairs_; }
  const std::vector<CentralizerData>& centralizers() const { return cents_; }
  const CentralizerData& centralizer_of_class(int c) const { return cents_.at(slot_.at(c)); }
  bool covers(int s) const { return transporter_[s] >= 0; }

  /// Index of the pair class of (s, x); requires sx = xs and s covered.
  int index(int s, int x) const {
    const FiniteGroup& G = atlas_->group();
    int y = transporter_[s];
    int k = slot_[G.class_of(s)];
    return index_[k][G.conj(y, x)];
  }

 private:
  const Atlas* atlas_;
  std::vector<int> slot_;
  std::vector<CentralizerData> cents_;
  std::vector<int> transporter_;
  std::vector<std::vector<int>> index_;
  std::vector<CommutingPair> pairs_;
  std::map<std::pair<int, int>, int> by_pair_;
};

inline std::vector<int> all_classes(const FiniteGroup& G) {
  std::vector<int> v(G.num_classes());
  for (int c = 0; c < G.num_classes(); ++c) v[c] = c;
  return v;
}

/// Phi(s, x) = trace(s | E_x) on the pairs of a PairIndex.
using PhiVec = std::vector<CycNum>;

/// Conjugation-equivariant bundle on G with stalk L at g (g a class rep),
/// given by its Phi values on pairs of `idx`.
inline PhiVec bundle_phi(const Atlas& atlas, const PairIndex& idx, int g_class, int L, int N) {
  const FiniteGroup& G = atlas.group();
  int g = G.classes()[g_class].representative;
  const SubgroupData& Z = atlas.subgroup(centralizer(G, g));
  PhiVec out(idx.size(), CycNum(mpq_class(0), N));
  for (int i = 0; i < idx.size(); ++i) {
    const auto& pr = idx.pairs()[i];
    if (G.class_of(pr.g) != g_class) continue;
    int z = -1;
    for (int y = 0; y < G.order(); ++y)
      if (G.conj(y, pr.g) == g) {
        z = y;
        break;
      }
    int s = G.conj(z, pr.u);
    out[i] = Z.table->at(L, Z.emb.from_parent[s]).lift(N);
  }
  return out;
}

/// Phi_{a*b}(s, g) = sum over x y = g with x, y in Z(s) of Phi_a(s,x) Phi_b(s,y).
inline PhiVec convolve_phi(const Atlas& atlas, const PairIndex& idx, const PhiVec& a, const PhiVec& b, int N) {
  const FiniteGroup& G = atlas.group();
  PhiVec out(idx.size(), CycNum(mpq_class(0), N));
  for (int i = 0; i < idx.size(); ++i) {
    const auto& pr = idx.pairs()[i];
    const auto& Z = idx.centralizer_of_class(pr.u_class).data->sub;
    for (int x : Z.members) {
      int y = G.mul(G.inv(x), pr.g);
      const CycNum& fa = a[idx.index(pr.u, x)];
      if (fa.is_zero()) continue;
      const CycNum& fb = b[idx.index(pr.u, y)];
      if (fb.is_zero()) continue;
      out[i].add_product(fa, fb);
    }
  }
  return out;
}

/// Enriched class (u, L): u a p-power class representative, L in Irr(Z_G(u)).
struct EnrichedClass {
  int u_class = 0;
  int u = 0;
  int L = 0;
  bool operator==(const EnrichedClass& o) const { return u_class == o.u_class && L == o.L; }
};

/**
 * The character ring: Phi-functions on commuting pairs (u, g) with u of
 * p-power order, under convolution.
 */
class CharRing {
 public:
  struct Generator {
    int g_class;
    int L;
  };

  CharRing(const Atlas& atlas, const ZqRing& R)
      : atlas_(&atlas), R_(&R), N_(atlas.group().exponent()), idx_(atlas, p_power_classes(atlas.group(), R.p())) {
    const FiniteGroup& G = atlas.group();
    for (int c = 0; c < G.num_classes(); ++c) {
      const SubgroupData& Z = atlas.subgroup(centralizer(G, G.classes()[c].representative));
      for (int L = 0; L < Z.table->size(); ++L) gens_.push_back({c, L});
    }
    for (auto& g : gens_) gen_phi_.push_back(bundle_phi(atlas, idx_, g.g_class, g.L, N_));
    for (const auto& cd : idx_.centralizers())
      for (int L = 0; L < cd.data->table->size(); ++L) enriched_.push_back({cd.cls, cd.rep, L});
  }

  const Atlas& atlas() const { return *atlas_; }
  const FiniteGroup& group() const { return atlas_->group(); }
  const ZqRing& ring() const { return *R_; }
  u64 p() const { return R_->p(); }
  int conductor() const { return N_; }
  int rank() const { return idx_.size(); }
  const PairIndex& pairs() const { return idx_; }
  const std::vector<Generator>& generators() const { return gens_; }
  const PhiVec& generator(int i) const { return gen_phi_[i]; }
  const std::vector<EnrichedClass>& enriched() const { return enriched_; }

  PhiVec zero() const { return PhiVec(rank(), CycNum(mpq_class(0), N_)); }
  PhiVec unit() const {
    PhiVec u = zero();
    for (int i = 0; i < rank(); ++i)
      if (idx_.pairs()[i].g == 0) u[i] = CycNum(mpq_class(1), N_);
    return u;
  }
  PhiVec convolve(const PhiVec& a, const PhiVec& b) const { return convolve_phi(*atlas_, idx_, a, b, N_); }

  PhiVec combine(const std::vector<i64>& coeffs) const {
    PhiVec out = zero();
    for (size_t j = 0; j < coeffs.size(); ++j)
      if (coeffs[j])
        for (int i = 0; i < rank(); ++i) out[i] += gen_phi_[j][i] * mpq_class(static_cast<long>(coeffs[j]));
    return out;
  }

  /// chi_{(u,L)}(a) = (1/dim L) sum_{g in Z(u)} Phi_a(u, g) chi_L(g).
  CycNum chi(const EnrichedClass& e, const PhiVec& a) const {
    const FiniteGroup& G = group();
    const auto& cd = idx_.centralizer_of_class(e.u_class);
    const auto& T = *cd.data->table;
    CycNum s(mpq_class(0), N_);
    for (int g : cd.data->sub.members) {
      const CycNum& f = a[idx_.index(e.u, g)];
      if (f.is_zero()) continue;
      s.add_product(f, T.at(e.L, cd.data->emb.from_parent[g]).lift(N_));
    }
    (void)G;
    return s * frac(1, T.degree(e.L));
  }

  /// Galois twist (u, L) -> (u^t, sigma_t L) with sigma_t acting on
  /// character values through the exponent t' of zeta_N.
  EnrichedClass twist(const EnrichedClass& e, i64 tprime) const {
    const FiniteGroup& G = group();
    int ut = G.pow(e.u, tprime);
    int c = G.class_of(ut);
    const auto& target = idx_.centralizer_of_class(c);
    const auto& src = idx_.centralizer_of_class(e.u_class);
    int x = -1;  // x ut x^-1 = target.rep
    for (int y = 0; y < G.order(); ++y)
      if (G.conj(y, ut) == target.rep) {
        x = y;
        break;
      }
    const auto& Tt = *target.data->table;
    const auto& Ts = *src.data->table;
    const FiniteGroup& Zt = *target.data->emb.group;
    ClassFunction f(Zt.num_classes());
    for (int d = 0; d < Zt.num_classes(); ++d) {
      int h = target.data->emb.to_parent[Zt.classes()[d].representative];
      int back = G.conj(G.inv(x), h);
      f[d] = Ts.at(e.L, src.data->emb.from_parent[back]).lift(N_).galois(tprime);
    }
    for (int L = 0; L < Tt.size(); ++L) {
      bool eq = true;
      for (int d = 0; d < Zt.num_classes() && eq; ++d) eq = Tt.value(L, d).lift(N_) == f[d];
      if (eq) return {c, target.rep, L};
    }
    throw InvariantViolation("twisted character is not irreducible");
  }

  int enriched_index(const EnrichedClass& e) const {
    for (size_t i = 0; i < enriched_.size(); ++i)
      if (enriched_[i] == e) return static_cast<int>(i);
    throw InvariantViolation("unknown enriched class");
  }

 private:
  const Atlas* atlas_;
  const ZqRing* R_;
  int N_;
  PairIndex idx_;
  std::vector<Generator> gens_;
  std::vector<PhiVec> gen_phi_;
  std::vector<EnrichedClass> enriched_;
};

/// Bundle-level convolution over all commuting pairs, used to certify that
/// products of integral generators are integral.  Returns, per class of g,
/// the multiplicities of the product's stalk in Irr(Z_G(g)).
inline std::vector<std::vector<i64>> convolve_bundles_integral(const Atlas& atlas, const PairIndex& full, const PhiVec& a,
                                                               const PhiVec& b, int N) {
  const FiniteGroup& G = atlas.group();
  PhiVec c = convolve_phi(atlas, full, a, b, N);
  std::vector<std::vector<i64>> out;
  for (int cls = 0; cls < G.num_classes(); ++cls) {
    const auto& cd = full.centralizer_of_class(cls);
    const FiniteGroup& Z = *cd.data->emb.group;
    ClassFunction f(Z.num_classes());
    for (int d = 0; d < Z.num_classes(); ++d) {
      int s = cd.data->emb.to_parent[Z.classes()[d].representative];
      f[d] = c[full.index(s, cd.rep)];
    }
    out.push_back(decompose_integral(*cd.data->table, f));
  }
  return out;
}

// ---------------------------------------------------------------- spectrum

struct Spectrum {
  std::vector<EnrichedClass> enriched;
  std::vector<std::vector<int>> minimal_primes;  // orbits of enriched classes
  int A = 0;
  bool stable_at_A_plus_1 = false;
  bool q_sensitive = false;
  BlockPartition blocks;
  std::vector<int> specialization;       // per enriched class: block of G
  std::vector<int> congruence_class;     // per enriched class
  int num_congruence_classes = 0;
  bool partitions_agree = false;
  bool specialization_constant_on_orbits = false;
};

/// Exponents t' mod N acting as t on p-power roots of unity and as a power
/// of q on prime-to-p ones, for t in (Z/p^A)^x.
inline std::vector<i64> galois_exponents(int N, u64 p, int A, u64 q) {
  auto [pa, m] = split_part(static_cast<u64>(N), p);
  u64 pA = ipow(p, A);
  std::set<i64> out;
  std::vector<u64> qpowers{1 % m};
  for (u64 v = q % m; v != 1 % m; v = v * q % m) qpowers.push_back(v);
  for (u64 t = 1; t < std::max<u64>(pA, 2); ++t) {
    if (pA > 1 && t % p == 0) continue;
    for (u64 s : qpowers)
      for (u64 x = 0; x < static_cast<u64>(N); ++x)
        if (x % pa == t % pa && x % m == s % m && std::gcd(x, static_cast<u64>(N)) == 1) {
          out.insert(static_cast<i64>(x));
          break;
        }
  }
  return {out.begin(), out.end()};
}

inline std::vector<std::vector<int>> galois_orbits(const CharRing& CR, const std::vector<i64>& ts) {
  const auto& E = CR.enriched();
  std::vector<int> orbit(E.size(), -1);
  std::vector<std::vector<int>> out;
  for (size_t i = 0; i < E.size(); ++i) {
    if (orbit[i] >= 0) continue;
    std::vector<int> orb;
    for (i64 t : ts) {
      int j = CR.enriched_index(CR.twist(E[i], t));
      if (orbit[j] < 0) {
        orbit[j] = static_cast<int>(out.size());
        orb.push_back(j);
      }
    }
    std::sort(orb.begin(), orb.end());
    out.push_back(orb);
  }
  return out;
}

/// Specialization of (u, L): block of L in Z_q[Z_G(u)], then Brauer correspondent.
inline int specialize(const CharRing& CR, const EnrichedClass& e, const BlockPartition& BG) {
  const auto& cd = CR.pairs().centralizer_of_class(e.u_class);
  BlockPartition BH = blocks_of_zqG(*cd.data->table, CR.ring());
  return brauer_correspondent(CR.atlas().table(), BG, *cd.data, BH, BH.block_of[e.L], CR.ring());
}

inline Spectrum compute_spectrum(const CharRing& CR) {
  Spectrum S;
  const FiniteGroup& G = CR.group();
  u64 p = CR.p();
  S.enriched = CR.enriched();
  S.A = valuation(G.exponent(), p);
  int N = CR.conductor();
  auto ts = galois_exponents(N, p, S.A, CR.ring().q());
  S.minimal_primes = galois_orbits(CR, ts);
  S.stable_at_A_plus_1 = galois_orbits(CR, galois_exponents(N, p, S.A + 1, CR.ring().q())) == S.minimal_primes;
  u64 q2 = CR.ring().q() * CR.ring().q();
  S.q_sensitive = galois_orbits(CR, galois_exponents(N, p, S.A, q2)) != S.minimal_primes;

  S.blocks = blocks_of_zqG(CR.atlas().table(), CR.ring());
  for (auto& e : S.enriched) S.specialization.push_back(specialize(CR, e, S.blocks));

  // congruence of chi values modulo the prime over p, on all generators
  const ZqRing& F = CR.ring().residue();
  std::vector<std::vector<ZqElem>> keys;
  for (auto& e : S.enriched) {
    std::vector<ZqElem> key;
    for (size_t j = 0; j < CR.generators().size(); ++j) key.push_back(reduce_mod_p(CR.chi(e, CR.generator(j)), F));
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      S.congruence_class.push_back(static_cast<int>(keys.size()));
      keys.push_back(key);
    } else {
      S.congruence_class.push_back(static_cast<int>(it - keys.begin()));
    }
  }
  S.num_congruence_classes = static_cast<int>(keys.size());
  S.partitions_agree = true;
  for (size_t i = 0; i < S.enriched.size(); ++i)
    for (size_t j = 0; j < S.enriched.size(); ++j)
      if ((S.congruence_class[i] == S.congruence_class[j]) != (S.specialization[i] == S.specialization[j]))
        S.partitions_agree = false;
  S.specialization_constant_on_orbits = true;
  for (auto& orb : S.minimal_primes)
    for (int i : orb)
      if (S.specialization[i] != S.specialization[orb[0]]) S.specialization_constant_on_orbits = false;
  return S;
}

/// Rank over the residue field F_ell of the matrix rows x cols of cyclotomic entries.
inline int cyc_rank_mod_ell(const std::vector<std::vector<CycNum>>& M, const EllReducer& red) {
  ModMat A;
  for (auto& row : M) {
    std::vector<u64> r;
    for (auto& x : row) r.push_back(red(x));
    A.push_back(r);
  }
  return rank_mod_ell(A, red.ell());
}

/// Rank of the joint evaluation map (all chi_{(u,L)} on all generators).
inline int evaluation_rank(const CharRing& CR) {
  EllReducer red(CR.conductor(), static_cast<u64>(CR.group().order()));
  std::vector<std::vector<CycNum>> M;
  for (auto& e : CR.enriched()) {
    std::vector<CycNum> row;
    for (size_t j = 0; j < CR.generators().size(); ++j) row.push_back(CR.chi(e, CR.generator(j)));
    M.push_back(row);
  }
  return cyc_rank_mod_ell(M, red);
}

/// Rank of the lattice spanned by the generators' Phi vectors.
inline int lattice_rank(const CharRing& CR) {
  EllReducer red(CR.conductor(), static_cast<u64>(CR.group().order()));
  std::vector<std::vector<CycNum>> M;
  for (size_t j = 0; j < CR.generators().size(); ++j) M.push_back(CR.generator(j));
  return cyc_rank_mod_ell(M, red);
}

/// support of the permutation module of X at (u, L): L occurs in C[X^u].
inline bool support_contains(const CharRing& CR, const FiniteGSet& X, const EnrichedClass& e) {
  const auto& cd = CR.pairs().centralizer_of_class(e.u_class);
  const auto& Z = *cd.data;
  auto [Xu, pts] = X.fixed_points_as(Z.emb, e.u);
  (void)pts;
  const FiniteGroup& H = *Z.emb.group;
  ClassFunction perm(H.num_classes());
  for (int d = 0; d < H.num_classes(); ++d)
    perm[d] = CycNum(mpq_class(static_cast<long>(Xu.fixed_points(H.classes()[d].representative).size())));
  return inner_product(H, perm, Z.table->row(e.L)).rational() > 0;
}

// ------------------------------------------------------------ abelian case

struct AbelianIsoReport {
  int rank = 0;
  bool structure_constants_match = false;
};

/**
 * For an abelian p-group, the skyscraper bundles (g, chi) multiply like the
 * group elements of G x G^dual.  Every product is expressed in the generator
 * basis and compared with the group law.
 */
inline AbelianIsoReport abelian_iso_check(const CharRing& CR) {
  const FiniteGroup& G = CR.group();
  if (!G.is_abelian()) throw NotAbelian("group is not abelian");
  if (!is_p_power(G.order(), CR.p())) throw NotPGroup("group is not a p-group for the chosen p");
  const auto& T = CR.atlas().table();
  int n = G.order();
  // product of characters as an index
  std::vector<std::vector<int>> chimul(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      ClassFunction f = product_cf(T.row(a), T.row(b));
      for (int c = 0; c < n; ++c)
        if (T.row(c) == f) chimul[a][b] = c;
    }
  // generator order is (class of g, L) with classes = elements
  auto gen_index = [&](int g, int chi) { return G.class_of(g) * n + chi; };
  AbelianIsoReport rep;
  rep.rank = CR.rank();
  rep.structure_constants_match = static_cast<int>(CR.generators().size()) == n * n && CR.rank() == n * n;
  for (size_t i = 0; i < CR.generators().size() && rep.structure_constants_match; ++i)
    for (size_t j = 0; j < CR.generators().size() && rep.structure_constants_match; ++j) {
      const auto& a = CR.generators()[i];
      const auto& b = CR.generators()[j];
      int ga = G.classes()[a.g_class].representative, gb = G.classes()[b.g_class].representative;
      int target = gen_index(G.mul(ga, gb), chimul[a.L][b.L]);
      if (CR.convolve(CR.generator(i), CR.generator(j)) != CR.generator(target)) rep.structure_constants_match = false;
    }
  return rep;
}

}  // namespace kq
