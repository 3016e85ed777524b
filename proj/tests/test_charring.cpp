#include <gtest/gtest.h>

#include "kq/charring.hpp"
#include "oracles.hpp"

using namespace kq;

using kq::oracle::commuting_pairs;

TEST(CharRing, RankMatchesCommutingPairs) {
  for (auto [name, p] : std::vector<std::pair<const char*, u64>>{
           {"S3", 2}, {"S3", 3}, {"D4", 2}, {"Q8", 2}, {"A4", 2}, {"A4", 3}, {"Z/6", 2}, {"S4", 2}, {"S4", 3}}) {
    auto G = builtin_group(name);
    Atlas at(G);
    CharRing CR(at, default_ring(*G, p, 8));
    EXPECT_EQ(CR.rank(), commuting_pairs(*G, p)) << name;
    EXPECT_EQ(CR.rank(), static_cast<int>(commuting_pair_classes(*G, p).size()));
    EXPECT_EQ(evaluation_rank(CR), CR.rank()) << name;
    EXPECT_EQ(lattice_rank(CR), CR.rank()) << name;
    EXPECT_EQ(CR.enriched().size(), static_cast<size_t>(CR.rank()));
  }
}

TEST(CharRing, ChiIsUnitalAndMultiplicative) {
  for (auto [name, p] : std::vector<std::pair<const char*, u64>>{{"S3", 2}, {"S3", 3}, {"D4", 2}, {"Z2xZ2", 2}, {"A4", 2}}) {
    auto G = builtin_group(name);
    Atlas at(G);
    CharRing CR(at, default_ring(*G, p, 8));
    for (auto& e : CR.enriched()) EXPECT_EQ(CR.chi(e, CR.unit()), CycNum(mpq_class(1))) << name;
    size_t n = CR.generators().size();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        auto c = CR.convolve(CR.generator(i), CR.generator(j));
        for (auto& e : CR.enriched())
          ASSERT_EQ(CR.chi(e, c), CR.chi(e, CR.generator(i)) * CR.chi(e, CR.generator(j))) << name;
      }
  }
}

TEST(CharRing, ConvolutionIsCommutativeAndAssociative) {
  auto G = builtin_group("D4");
  Atlas at(G);
  CharRing CR(at, default_ring(*G, 2, 8));
  Rng rng(11);
  size_t n = CR.generators().size();
  for (int it = 0; it < 10; ++it) {
    const auto& a = CR.generator(rng.below(n));
    const auto& b = CR.generator(rng.below(n));
    const auto& c = CR.generator(rng.below(n));
    EXPECT_EQ(CR.convolve(a, b), CR.convolve(b, a));
    EXPECT_EQ(CR.convolve(CR.convolve(a, b), c), CR.convolve(a, CR.convolve(b, c)));
  }
}

TEST(Spectrum, BrauerConsistency) {
  for (auto [name, p] : std::vector<std::pair<const char*, u64>>{{"S3", 2}, {"S3", 3}, {"S4", 2}, {"A4", 2}}) {
    auto G = builtin_group(name);
    Atlas at(G);
    CharRing CR(at, default_ring(*G, p, 8));
    auto S = compute_spectrum(CR);
    EXPECT_TRUE(S.partitions_agree) << name;
    EXPECT_TRUE(S.specialization_constant_on_orbits) << name;
    EXPECT_EQ(S.num_congruence_classes, static_cast<int>(S.blocks.blocks.size())) << name;
    EXPECT_TRUE(S.stable_at_A_plus_1) << name;
  }
}

TEST(Spectrum, S3AtTwoFrozen) {
  // rational characters: every enriched class is its own Galois orbit
  auto G = builtin_group("S3");
  Atlas at(G);
  CharRing CR(at, default_ring(*G, 2, 8));
  auto S = compute_spectrum(CR);
  EXPECT_EQ(S.minimal_primes.size(), 5u);
  EXPECT_EQ(S.blocks.blocks.size(), 2u);
  EXPECT_FALSE(S.q_sensitive);
}

TEST(Spectrum, CyclicGaloisOrbits) {
  // Z/4 at p = 2: (u, L) with u = 1 has four characters permuted in orbits by Galois over Q_2
  auto G = builtin_group("Z/4");
  Atlas at(G);
  CharRing CR(at, default_ring(*G, 2, 8));
  auto S = compute_spectrum(CR);
  size_t total = 0;
  for (auto& o : S.minimal_primes) total += o.size();
  EXPECT_EQ(total, CR.enriched().size());
  EXPECT_LT(S.minimal_primes.size(), CR.enriched().size());
  EXPECT_EQ(S.blocks.blocks.size(), 1u);
}

TEST(Support, PermutationModules) {
  auto G = builtin_group("S3");
  Atlas at(G);
  CharRing CR(at, default_ring(*G, 2, 8));
  auto pt = point_gset(G), reg = regular_gset(G);
  int in_pt = 0, in_reg = 0;
  for (auto& e : CR.enriched()) {
    in_pt += support_contains(CR, pt, e);
    in_reg += support_contains(CR, reg, e);
    // free modules only see u = 1
    if (e.u_class != 0) {
      EXPECT_FALSE(support_contains(CR, reg, e));
    }
  }
  EXPECT_EQ(in_pt, 2);   // trivial rep at u = 1 and at u = (12)
  EXPECT_EQ(in_reg, 3);  // every irreducible of S3
}

TEST(AbelianShadow, StructureConstants) {
  for (const char* name : {"Z/2", "Z/4", "Z2xZ2"}) {
    auto G = builtin_group(name);
    Atlas at(G);
    CharRing CR(at, default_ring(*G, 2, 8));
    auto r = abelian_iso_check(CR);
    EXPECT_EQ(r.rank, G->order() * G->order());
    EXPECT_TRUE(r.structure_constants_match) << name;
  }
  auto S3 = builtin_group("S3");
  Atlas at(S3);
  CharRing CR(at, default_ring(*S3, 2, 8));
  EXPECT_THROW(abelian_iso_check(CR), NotAbelian);
}
