#include <gtest/gtest.h>

#include "kq/repring.hpp"

using namespace kq;

namespace {

struct Case {
  std::shared_ptr<Atlas> atlas;
  const ZqRing* R;
  std::shared_ptr<RepRing> RR;
};

Case make(const char* name, u64 p, int k = 8) {
  Case c;
  c.atlas = std::make_shared<Atlas>(builtin_group(name));
  c.R = &default_ring(c.atlas->group(), p, k);
  c.RR = std::make_shared<RepRing>(*c.atlas, *c.R);
  return c;
}

std::vector<std::pair<const char*, u64>> group_primes() {
  std::vector<std::pair<const char*, u64>> out;
  for (const char* n : {"Z/4", "Z2xZ2", "D4", "Q8", "S3", "A4", "S4", "Z/6", "A5"})
    for (u64 p : {2, 3, 5})
      if (builtin_group(n)->order() % p == 0) out.push_back({n, p});
  return out;
}

}  // namespace

TEST(Bonnafe, SuiteIsCompleteOrthogonalPrimitive) {
  for (auto [name, p] : group_primes()) {
    auto c = make(name, p);
    auto E = c.RR->idempotent_suite();
    EXPECT_EQ(E.size(), p_prime_classes(c.atlas->group(), p).size()) << name;
    Vec s = zero_vec(*c.R, c.RR->rank());
    for (size_t i = 0; i < E.size(); ++i) {
      for (int t = 0; t < c.RR->rank(); ++t) s[t] += E[i][t];
      for (size_t j = 0; j < E.size(); ++j) {
        Vec x = c.RR->mul(E[i], E[j]);
        if (i == j)
          EXPECT_EQ(x, E[i]) << name << " p=" << p;
        else
          EXPECT_TRUE(is_zero(x)) << name << " p=" << p;
      }
      EXPECT_TRUE(c.RR->is_primitive(E[i])) << name << " p=" << p;
    }
    EXPECT_EQ(s, c.RR->unit()) << name;
  }
}

// Oracle: e_C as a virtual character is the indicator of the elements whose
// p'-part lies in C; on p'-elements this is checked inside Z_q.
TEST(Bonnafe, CharacterIsIndicatorOnPPrimeElements) {
  for (auto [name, p] : group_primes()) {
    auto c = make(name, p);
    const FiniteGroup& G = c.atlas->group();
    const auto& T = c.atlas->table();
    for (int cls : p_prime_classes(G, p)) {
      Vec e = c.RR->bonnafe_idempotent(cls);
      for (int d : p_prime_classes(G, p)) {
        ZqElem v = c.R->zero();
        for (int L = 0; L < T.size(); ++L) v += e[L] * embed_cyc_to_zq(T.value(L, d), *c.R);
        EXPECT_EQ(v, c.R->from_int(d == cls)) << name << " p=" << p;
      }
    }
  }
}

TEST(Bonnafe, DocumentedValues) {
  // S3, p = 3, transpositions: (triv - sign) / 2
  auto c = make("S3", 3);
  const ZqRing& R = *c.R;
  Vec e = c.RR->bonnafe_idempotent(parse_class(c.atlas->group(), "2a"));
  Vec want{R.from_rational(mpq_class(1, 2)), R.from_rational(mpq_class(-1, 2)), R.zero()};
  EXPECT_EQ(e, want);
  // Z/2, p = 3, identity class: (triv + sign) / 2
  auto z = make("Z/2", 3);
  Vec f = z.RR->bonnafe_idempotent(0);
  EXPECT_EQ(f, (Vec{z.R->from_rational(mpq_class(1, 2)), z.R->from_rational(mpq_class(1, 2))}));
  // p-group with C = {1}: e = 1
  auto q = make("Q8", 2);
  EXPECT_EQ(q.RR->bonnafe_idempotent(0), q.RR->unit());
  EXPECT_THROW(c.RR->bonnafe_idempotent(parse_class(c.atlas->group(), "3a")), InputError);
}

TEST(Kuhn, RanksAndTwoConstructions) {
  for (auto [name, p] : group_primes()) {
    auto c = make(name, p);
    auto K = kuhn_ideal(*c.RR);
    EXPECT_EQ(K.quotient_rank, static_cast<int>(p_power_classes(c.atlas->group(), p).size())) << name;
    EXPECT_EQ(K.ideal_rank + K.quotient_rank, c.RR->rank());
    EXPECT_TRUE(K.lattices_equal) << name << " p=" << p;
    EXPECT_EQ(K.kernel_snf, K.image_snf);
    EXPECT_TRUE(K.is_ideal);
  }
}

TEST(Kuhn, DocumentedValues) {
  auto c = make("S3", 3);
  auto K = kuhn_ideal(*c.RR);
  EXPECT_EQ(K.ideal_rank, 1);
  EXPECT_EQ(K.quotient_rank, 2);
  // p-group: zero ideal
  auto z = make("Z/8", 2);
  EXPECT_EQ(kuhn_ideal(*z.RR).ideal_rank, 0);
  // p coprime to |G|: quotient rank 1
  auto w = make("S3", 5);
  EXPECT_EQ(kuhn_ideal(*w.RR).quotient_rank, 1);
}

TEST(Kq0, DocumentedRanksAndAdditivity) {
  auto G = builtin_group("Z/3");
  Atlas at(G);
  const ZqRing& R = default_ring(*G, 3, 8);
  EXPECT_EQ(kq0_of_gset(at, point_gset(G), R).total_rank, 3);
  EXPECT_EQ(kq0_of_gset(at, regular_gset(G), R).total_rank, 1);
  auto S4 = builtin_group("S4");
  Atlas a4(S4);
  const ZqRing& R2 = default_ring(*S4, 2, 8);
  EXPECT_EQ(kq0_of_gset(a4, point_gset(S4), default_ring(*S4, 5, 8)).total_rank, 1);
  auto Y = all_cosets(S4);
  int sum = 0;
  for (auto& H : subgroup_class_reps(*S4)) sum += kq0_of_gset(a4, coset_space(S4, H), R2).total_rank;
  EXPECT_EQ(kq0_of_gset(a4, Y, R2).total_rank, sum);
  // rank = sum over orbits of p-power classes of the stabilizer
  int direct = 0;
  for (auto& H : subgroup_class_reps(*S4)) {
    auto E = as_group(*S4, H);
    direct += static_cast<int>(p_power_classes(*E.group, 2).size());
  }
  EXPECT_EQ(sum, direct);
}

TEST(Blocks, DocumentedPartitions) {
  auto G = builtin_group("S3");
  CharacterTable T(G);
  auto b3 = blocks_of_zqG(T, default_ring(*G, 3, 8));
  EXPECT_EQ(b3.blocks, (std::vector<std::vector<int>>{{0, 1, 2}}));
  auto b2 = blocks_of_zqG(T, default_ring(*G, 2, 8));
  EXPECT_EQ(b2.blocks, (std::vector<std::vector<int>>{{0, 1}, {2}}));
  auto b5 = blocks_of_zqG(T, default_ring(*G, 5, 8));
  EXPECT_EQ(b5.blocks.size(), 3u);
}

TEST(Blocks, BrauerCorrespondents) {
  auto G = builtin_group("S3");
  Atlas at(G);
  const ZqRing& R = default_ring(*G, 2, 8);
  auto BG = blocks_of_zqG(at.table(), R);
  const auto& Z = at.subgroup(centralizer(*G, G->classes()[parse_class(*G, "2a")].representative));
  auto BH = blocks_of_zqG(*Z.table, R);
  ASSERT_EQ(BH.blocks.size(), 1u);
  EXPECT_EQ(brauer_correspondent(at.table(), BG, Z, BH, 0, R), BG.block_of[0]);
  // u = 1 gives the identity map
  const auto& W = at.subgroup(whole_group(*G));
  for (size_t b = 0; b < BG.blocks.size(); ++b)
    EXPECT_EQ(brauer_correspondent(at.table(), BG, W, BG, static_cast<int>(b), R), static_cast<int>(b));
  const ZqRing& R3 = default_ring(*G, 3, 8);
  auto BG3 = blocks_of_zqG(at.table(), R3);
  const auto& A3 = at.subgroup(centralizer(*G, G->classes()[parse_class(*G, "3a")].representative));
  auto BA = blocks_of_zqG(*A3.table, R3);
  EXPECT_EQ(brauer_correspondent(at.table(), BG3, A3, BA, 0, R3), 0);
}

TEST(Blocks, CountsFromDefectTheory) {
  // defect-zero characters give singleton blocks; O_p(G) self-centralizing gives one block
  const std::map<std::pair<std::string, u64>, int> want{
      {{"S3", 2}, 2}, {{"S3", 3}, 1}, {{"S4", 2}, 1}, {{"S4", 3}, 3}, {{"A4", 2}, 1}, {{"A5", 2}, 2}, {{"A5", 5}, 2}};
  for (auto& [k, n] : want) {
    auto G = builtin_group(k.first);
    CharacterTable T(G);
    auto B = blocks_of_zqG(T, default_ring(*G, k.second, 8));
    EXPECT_EQ(static_cast<int>(B.blocks.size()), n) << k.first << " p=" << k.second;
    EXPECT_LE(B.blocks.size(), p_prime_classes(*G, k.second).size());
  }
}
