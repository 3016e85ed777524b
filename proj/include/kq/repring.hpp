#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "kq/chartab.hpp"
#include "kq/finalg.hpp"
#include "kq/gset.hpp"

namespace kq {

/// Z_q/p^k large enough for the prime-to-p part of exp(G) (or f_override).
inline const ZqRing& default_ring(const FiniteGroup& G, u64 p, int k, int f_override = 0) {
  if (!is_prime(p)) throw InputError("p must be prime");
  u64 m = split_part(static_cast<u64>(G.exponent()), p).second;
  int f = auto_q_exponent(p, m);
  if (f_override > 0) {
    if ((ipow(p, f_override) - 1) % m) throw DivisibilityError("q = p^" + std::to_string(f_override) + " is too small for exp(G)");
    f = f_override;
  }
  return ZqRing::get(p, f, k);
}

/// Classes of elements of order prime to p, in class order.
inline std::vector<int> p_prime_classes(const FiniteGroup& G, u64 p) {
  std::vector<int> out;
  for (int c = 0; c < G.num_classes(); ++c)
    if (G.classes()[c].element_order % p) out.push_back(c);
  return out;
}

inline std::vector<int> p_power_classes(const FiniteGroup& G, u64 p) {
  std::vector<int> out;
  for (int c = 0; c < G.num_classes(); ++c)
    if (is_p_power(G.classes()[c].element_order, p)) out.push_back(c);
  return out;
}

/// Integer matrix of Res: column chi holds the multiplicities of Res chi.
inline std::vector<std::vector<i64>> restriction_matrix(const CharacterTable& TG, const SubgroupData& H) {
  std::vector<std::vector<i64>> M(H.table->size(), std::vector<i64>(TG.size()));
  for (int chi = 0; chi < TG.size(); ++chi) {
    auto m = decompose_integral(*H.table, restrict_cf(TG.group(), TG.row(chi), H.emb));
    for (int psi = 0; psi < H.table->size(); ++psi) M[psi][chi] = m[psi];
  }
  return M;
}

inline Mat to_mat(const ZqRing& R, const std::vector<std::vector<i64>>& M, int cols) {
  Mat A(R, static_cast<int>(M.size()), cols);
  for (size_t i = 0; i < M.size(); ++i)
    for (int j = 0; j < cols; ++j) A(static_cast<int>(i), j) = R.from_int(M[i][j]);
  return A;
}

/**
 * R(G) tensor Z_q/p^k on the basis of irreducible characters.
 */
class RepRing {
 public:
  RepRing(const Atlas& atlas, const ZqRing& R) : atlas_(&atlas), R_(&R) {
    const auto& T = atlas.table();
    int r = T.size();
    std::vector<std::vector<SCEntry>> rows(r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        auto m = decompose_integral(T, product_cf(T.row(i), T.row(j)));
        for (int k = 0; k < r; ++k)
          if (m[k]) rows[i].push_back({j, k, R.from_int(m[k])});
      }
    Vec u = zero_vec(R, r);
    u[0] = R.one();
    alg_ = FinAlgebra(R, r, std::move(rows), u, false);
  }

  const Atlas& atlas() const { return *atlas_; }
  const FiniteGroup& group() const { return atlas_->group(); }
  const CharacterTable& table() const { return atlas_->table(); }
  const ZqRing& ring() const { return *R_; }
  u64 p() const { return R_->p(); }
  int rank() const { return alg_.rank(); }
  const FinAlgebra& algebra() const { return alg_; }
  Vec mul(const Vec& a, const Vec& b) const { return alg_.mul(a, b); }
  Vec unit() const { return alg_.unit(); }
  Vec irreducible(int i) const { return alg_.basis(i); }

  /// e_C = (1/|G|) sum_L (sum over g with p'-part in C of chi_L(g^-1)) L.
  Vec bonnafe_idempotent(int cls) const {
    const FiniteGroup& G = group();
    if (cls < 0 || cls >= G.num_classes()) throw InputError("class index out of range");
    if (G.classes()[cls].element_order % p() == 0) throw InputError("class is not of order prime to p");
    const auto& T = table();
    std::vector<int> S;
    for (int g = 0; g < G.order(); ++g)
      if (G.class_of(p_decomposition(G, g, p()).second) == cls) S.push_back(g);
    u64 m = split_part(static_cast<u64>(G.exponent()), p()).second;
    Vec e = zero_vec(*R_, rank());
    for (int L = 0; L < T.size(); ++L) {
      CycNum s;
      for (int g : S) s += T.at(L, G.inv(g));
      s = s * frac(1, G.order());
      e[L] = embed_cyc_to_zq(descend(s, static_cast<int>(m)), *R_);
    }
    return e;
  }

  std::vector<Vec> idempotent_suite() const {
    std::vector<Vec> out;
    for (int c : p_prime_classes(group(), p())) out.push_back(bonnafe_idempotent(c));
    return out;
  }

  /// The corner eR mod p has no nontrivial idempotent.
  bool is_primitive(const Vec& e) const {
    const FinAlgebra Abar = alg_.reduced(R_->residue());
    Vec eb = reduce_vec(e, R_->residue());
    auto B = corner_basis(Abar, eb);
    if (B.empty()) return false;
    FinAlgebra L = subalgebra(Abar, B, eb);
    return is_local(L, radical(L));
  }

 private:
  const Atlas* atlas_;
  const ZqRing* R_;
  FinAlgebra alg_;
};

struct KuhnQuotient {
  std::vector<Vec> ideal_basis;     // restriction kernel, irreducible coordinates
  std::vector<Vec> image_basis;     // (1 - e_1) R, irreducible coordinates
  std::vector<Vec> quotient_basis;  // complement of the ideal
  int ideal_rank = 0;
  int quotient_rank = 0;
  int p_power_classes = 0;
  std::vector<int> kernel_snf, image_snf;
  bool lattices_equal = false;
  bool is_ideal = false;
};

inline bool same_span(const ZqRing& R, int n, const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  Mat A = Mat::from_columns(R, n, a), B = Mat::from_columns(R, n, b);
  for (auto& v : b)
    if (!solve_saturated(A, v, nullptr)) return false;
  for (auto& v : a)
    if (!solve_saturated(B, v, nullptr)) return false;
  return true;
}

/// Kuhn ideal computed as the kernel of restriction to a Sylow subgroup and
/// as the image of 1 - e_1; the two are compared as lattices.
inline KuhnQuotient kuhn_ideal(const RepRing& RR) {
  const FiniteGroup& G = RR.group();
  const ZqRing& R = RR.ring();
  int r = RR.rank();
  KuhnQuotient K;
  const SubgroupData& P = RR.atlas().subgroup(sylow_subgroup(G, RR.p()));
  K.ideal_basis = kernel_zq(to_mat(R, restriction_matrix(RR.table(), P), r));
  Vec e1 = RR.bonnafe_idempotent(0);
  Vec f = RR.unit();
  for (int i = 0; i < r; ++i) f[i] -= e1[i];
  K.image_basis = image_zq(RR.algebra().left_matrix(f));
  K.ideal_rank = static_cast<int>(K.ideal_basis.size());
  K.quotient_rank = r - K.ideal_rank;
  K.p_power_classes = static_cast<int>(p_power_classes(G, RR.p()).size());
  K.kernel_snf = smith_valuations(R, r, K.ideal_basis);
  K.image_snf = smith_valuations(R, r, K.image_basis);
  K.lattices_equal = same_span(R, r, K.ideal_basis, K.image_basis);
  K.is_ideal = true;
  if (!K.ideal_basis.empty()) {
    Mat B = Mat::from_columns(R, r, K.ideal_basis);
    for (auto& v : K.ideal_basis)
      for (int L = 0; L < r && K.is_ideal; ++L)
        if (!solve_saturated(B, RR.mul(v, RR.irreducible(L)), nullptr)) K.is_ideal = false;
  }
  SpanBasis S(R.residue(), r);
  for (auto& v : K.ideal_basis) S.insert(reduce_vec(v, R.residue()));
  for (int i = 0; i < r; ++i)
    if (S.insert(reduce_vec(RR.irreducible(i), R.residue()))) K.quotient_basis.push_back(RR.irreducible(i));
  return K;
}

struct OrbitKuhn {
  int orbit_rep = 0;
  Subgroup stabilizer;
  KuhnQuotient quotient;
};

struct GSetKq0 {
  std::vector<OrbitKuhn> orbits;
  int total_rank = 0;
};

/// K_q^0 of the Borel construction of X: one Kuhn quotient per orbit.
inline GSetKq0 kq0_of_gset(const Atlas& atlas, const FiniteGSet& X, const ZqRing& R) {
  GSetKq0 out;
  for (int o = 0; o < X.num_orbits(); ++o) {
    int x = X.orbit_reps()[o];
    OrbitKuhn ok;
    ok.orbit_rep = x;
    ok.stabilizer = X.stabilizer(x);
    const SubgroupData& S = atlas.subgroup(ok.stabilizer);
    Atlas sub(S.emb.group);
    RepRing RR(sub, R);
    ok.quotient = kuhn_ideal(RR);
    out.total_rank += ok.quotient.quotient_rank;
    out.orbits.push_back(std::move(ok));
  }
  return out;
}

// ------------------------------------------------------------------ blocks

/// Class multiplication constants a[i][j][k]: Ci Cj = sum_k a_ijk Ck.
inline std::vector<std::vector<std::vector<i64>>> class_constants(const FiniteGroup& G) {
  int c = G.num_classes();
  std::vector<std::vector<std::vector<i64>>> a(c, std::vector<std::vector<i64>>(c, std::vector<i64>(c, 0)));
  for (int k = 0; k < c; ++k) {
    int z = G.classes()[k].representative;
    for (int x = 0; x < G.order(); ++x) {
      int y = G.mul(G.inv(x), z);
      ++a[G.class_of(x)][G.class_of(y)][k];
    }
  }
  return a;
}

struct BlockPartition {
  std::vector<int> block_of;                 // per irreducible
  std::vector<std::vector<int>> blocks;      // irreducibles, ordered by first member
  std::vector<std::vector<ZqElem>> central;  // per block, per class, in the residue field
};

/// omega_chi(C) = |C| chi(g_C) / chi(1) reduced modulo the prime over p.
inline std::vector<ZqElem> central_character_mod_p(const CharacterTable& T, int chi, const ZqRing& R) {
  const FiniteGroup& G = T.group();
  std::vector<ZqElem> out;
  for (int c = 0; c < G.num_classes(); ++c) {
    CycNum w = T.value(chi, c) * frac(G.classes()[c].size(), T.degree(chi));
    out.push_back(reduce_mod_p(w, R));
  }
  return out;
}

inline BlockPartition blocks_of_zqG(const CharacterTable& T, const ZqRing& R) {
  BlockPartition B;
  std::map<std::vector<ZqElem>, int> index;
  std::vector<std::vector<ZqElem>> keys;
  for (int chi = 0; chi < T.size(); ++chi) {
    auto w = central_character_mod_p(T, chi, R);
    auto it = std::find(keys.begin(), keys.end(), w);
    int b;
    if (it == keys.end()) {
      b = static_cast<int>(keys.size());
      keys.push_back(w);
      B.blocks.emplace_back();
    } else {
      b = static_cast<int>(it - keys.begin());
    }
    B.blocks[b].push_back(chi);
    B.block_of.push_back(b);
  }
  B.central = keys;
  return B;
}

/**
 * Brauer correspondent of block b of H <= G: the block B of G with
 * lambda_B(C^) = lambda_b(sum of the H-classes inside C).  The induced map is
 * checked to be multiplicative on class sums.
 */
inline int brauer_correspondent(const CharacterTable& TG, const BlockPartition& BG, const SubgroupData& H,
                                const BlockPartition& BH, int b, const ZqRing& R) {
  const FiniteGroup& G = TG.group();
  const FiniteGroup& Hg = *H.emb.group;
  const ZqRing& F = R.residue();
  if (b < 0 || b >= static_cast<int>(BH.blocks.size())) throw InputError("block index out of range");
  std::vector<ZqElem> mu(G.num_classes(), F.zero());
  for (int d = 0; d < Hg.num_classes(); ++d) {
    int gcls = G.class_of(H.emb.to_parent[Hg.classes()[d].representative]);
    mu[gcls] += BH.central[b][d];
  }
  auto a = class_constants(G);
  int c = G.num_classes();
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) {
      ZqElem s = F.zero();
      for (int k = 0; k < c; ++k)
        if (a[i][j][k]) s += F.from_int(a[i][j][k]) * mu[k];
      if (s != mu[i] * mu[j]) throw CorrespondentUndefined("induced central character is not multiplicative");
    }
  for (size_t B = 0; B < BG.blocks.size(); ++B)
    if (BG.central[B] == mu) return static_cast<int>(B);
  throw CorrespondentUndefined("no block of G has the induced central character");
}

}  // namespace kq
