#include <gtest/gtest.h>

#include "kq/koszul.hpp"

using namespace kq;

namespace {

FinAbGroup cyc(std::vector<int> d) { return FinAbGroup(std::move(d)); }

// delta(nu)(a, b) = nu(a) + nu(b) - nu(a + b) in Q/Z, recomputed here from scratch
bool is_coboundary_of(const Cocycle2& c, const std::vector<mpq_class>& nu) {
  const FinAbGroup& A = c.A;
  for (int a = 0; a < A.order(); ++a)
    for (int b = 0; b < A.order(); ++b) {
      mpq_class d = nu[a] + nu[b] - nu[A.add(a, b)] - c(a, b);
      mpz_class f;
      mpz_fdiv_q(f.get_mpz_t(), d.get_num_mpz_t(), d.get_den_mpz_t());
      if (d != mpq_class(f)) return false;
    }
  return true;
}

}  // namespace

TEST(Koszul, ExactClassOrders) {
  for (int p : {2, 3})
    for (int e = 1; e <= 3; ++e) {
      int n = static_cast<int>(ipow(p, e));
      auto E = standard_cocycle(cyc({n}));
      EXPECT_TRUE(is_cocycle(E).ok) << n;
      EXPECT_EQ(class_order(E), n) << n;
      EXPECT_FALSE(coboundary_witness(E).has_value()) << n;
    }
}

TEST(Koszul, NonCyclicGroups) {
  auto E = standard_cocycle(cyc({2, 2}));
  EXPECT_TRUE(is_cocycle(E).ok);
  EXPECT_EQ(class_order(E), 2);
  auto F = standard_cocycle(cyc({2, 4}));
  EXPECT_EQ(class_order(F), 4);
  EXPECT_EQ(class_order(standard_cocycle(cyc({}))), 1);
}

TEST(Koszul, DiagonalRestrictionSplits) {
  for (auto d : std::vector<std::vector<int>>{{2}, {4}, {8}, {3}, {9}, {2, 2}, {2, 4}}) {
    auto D = diagonal_restricted_cocycle(cyc(d));
    EXPECT_TRUE(is_cocycle(D).ok);
    auto w = coboundary_witness(D);
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(is_coboundary_of(D, *w));
  }
}

TEST(Koszul, DoubleCocycleIsACocycle) {
  for (auto d : std::vector<std::vector<int>>{{2}, {3}, {2, 2}})
    EXPECT_TRUE(is_cocycle(double_cocycle(cyc(d))).ok);
}

TEST(Koszul, CoboundariesHaveOrderOne) {
  auto A = cyc({4, 2});
  Rng rng(3);
  std::vector<mpq_class> nu(A.order());
  for (auto& v : nu) v = mpq_class(static_cast<long>(rng.below(12)), 12);
  auto c = coboundary(A, nu);
  EXPECT_TRUE(is_cocycle(c).ok);
  EXPECT_EQ(class_order(c), 1);
  auto w = coboundary_witness(c);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(is_coboundary_of(c, *w));
}

TEST(Koszul, BrokenCochainIsRejected) {
  auto E = standard_cocycle(cyc({4}));
  E.num[5] = (E.num[5] + 1) % E.den;
  EXPECT_FALSE(is_cocycle(E).ok);
}

TEST(Koszul, AbelianInvariants) {
  EXPECT_EQ(abelian_invariants(*builtin_group("Z4xZ2")).factors(), (std::vector<int>{2, 4}));
  EXPECT_EQ(abelian_invariants(*builtin_group("Z/6")).factors(), (std::vector<int>{6}));
  EXPECT_EQ(abelian_invariants(*builtin_group("Z2xZ2")).factors(), (std::vector<int>{2, 2}));
  EXPECT_THROW(abelian_invariants(*builtin_group("S3")), NotAbelian);
}
