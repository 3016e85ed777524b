#include <gtest/gtest.h>

#include "kq/chartab.hpp"
#include "kq/gset.hpp"

using namespace kq;

namespace {

CycNum Q(long a, long b = 1) { return CycNum(mpq_class(a, b)); }

}  // namespace

TEST(CharTable, OrthogonalityEverywhere) {
  for (auto& n : builtin_group_names()) {
    auto G = builtin_group(n);
    CharacterTable T(G);
    ASSERT_EQ(T.size(), G->num_classes()) << n;
    i64 sq = 0;
    for (int a = 0; a < T.size(); ++a) {
      sq += static_cast<i64>(T.degree(a)) * T.degree(a);
      EXPECT_EQ(G->order() % T.degree(a), 0) << n;
      for (int b = 0; b < T.size(); ++b) EXPECT_EQ(inner_product(*G, T.row(a), T.row(b)), Q(a == b)) << n;
    }
    EXPECT_EQ(sq, G->order()) << n;
    for (int g = 0; g < G->num_classes(); ++g)
      for (int h = 0; h < G->num_classes(); ++h) {
        CycNum s;
        for (int a = 0; a < T.size(); ++a) s += T.value(a, g) * T.value(a, h).conj();
        long z = g == h ? G->order() / G->classes()[g].size() : 0;
        EXPECT_EQ(s, Q(z)) << n;
      }
  }
}

TEST(CharTable, S3Frozen) {
  auto G = builtin_group("S3");
  CharacterTable T(G);
  int c2 = parse_class(*G, "2a"), c3 = parse_class(*G, "3a");
  // triv, sign, standard
  EXPECT_EQ(T.value(0, c2), Q(1));
  EXPECT_EQ(T.value(1, c2), Q(-1));
  EXPECT_EQ(T.value(2, c2), Q(0));
  EXPECT_EQ(T.value(2, c3), Q(-1));
  EXPECT_EQ(T.degree(2), 2);
}

TEST(CharTable, A5GoldenRatio) {
  auto G = builtin_group("A5");
  CharacterTable T(G);
  int c5a = parse_class(*G, "5a"), c5b = parse_class(*G, "5b");
  CycNum phi = Q(1) + CycNum::zeta(5) + CycNum::zeta(5, 4);  // 1 + 2cos(2pi/5) = golden ratio
  int hits = 0;
  for (int a = 0; a < T.size(); ++a)
    if (T.degree(a) == 3) {
      CycNum v = T.value(a, c5a), w = T.value(a, c5b);
      EXPECT_EQ(v + w, Q(1));
      EXPECT_EQ(v * w, Q(-1));
      if (v == phi || w == phi) ++hits;
    }
  EXPECT_EQ(hits, 2);
}

TEST(CharTable, OrderingIsDeterministic) {
  auto G = builtin_group("D4");
  CharacterTable a(G), b(G);
  for (int i = 0; i < a.size(); ++i) EXPECT_EQ(a.row(i), b.row(i));
  EXPECT_EQ(a.degree(0), 1);
  for (auto& v : a.row(0)) EXPECT_EQ(v, Q(1));
  for (int i = 1; i < a.size(); ++i) EXPECT_LE(a.degree(i - 1), a.degree(i));
}

TEST(CharTable, PermutationCharacterCountsFixedPoints) {
  for (const char* n : {"S3", "D4", "A4", "S4"}) {
    auto G = builtin_group(n);
    Atlas at(G);
    auto Y = all_cosets(G);
    for (int o = 0; o < Y.num_orbits(); ++o) {
      Subgroup H = Y.stabilizer(Y.orbit_reps()[o]);
      const auto& S = at.subgroup(H);
      ClassFunction one(S.emb.group->num_classes(), Q(1));
      ClassFunction ind = induce_cf(*G, S.emb, one);
      auto X = coset_space(G, H);
      for (int c = 0; c < G->num_classes(); ++c)
        EXPECT_EQ(ind[c], Q(static_cast<long>(X.fixed_points(G->classes()[c].representative).size()))) << n;
      // Frobenius reciprocity for the trivial character
      EXPECT_EQ(inner_product(*G, ind, at.table().row(0)), Q(1));
    }
  }
}

TEST(CharTable, RestrictionDecomposesIntegrally) {
  auto G = builtin_group("S4");
  Atlas at(G);
  const auto& P = at.subgroup(sylow_subgroup(*G, 2));
  for (int a = 0; a < at.table().size(); ++a) {
    auto m = decompose_integral(*P.table, restrict_cf(*G, at.table().row(a), P.emb));
    i64 d = 0;
    for (int i = 0; i < P.table->size(); ++i) d += m[i] * P.table->degree(i);
    EXPECT_EQ(d, at.table().degree(a));
  }
}
