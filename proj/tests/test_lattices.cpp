#include <gtest/gtest.h>

#include "kq/io.hpp"
#include "kq/lattices.hpp"

using namespace kq;

namespace {

AbDescriptor free_of(int r) { return AbDescriptor{r, {}}; }
AbDescriptor tors(int n) { return AbDescriptor{0, std::vector<int>(n, 1)}; }

}  // namespace

// H^*(Z/p; V1) = Z_p in degree 0; H^*(V2) = R_* = Z_p[x2]/(p x2);
// H^*(V3) = R_*{y1}/(p y1) with |y1| = 1.
TEST(Lattice, CohomologyOfTheThreeBlocks) {
  for (u64 p : {2, 3, 5, 7}) {
    auto V1 = make_lattice(p, 8, v1_matrix(p));
    auto V2 = make_lattice(p, 8, v2_matrix(p));
    auto V3 = make_lattice(p, 8, v3_matrix(p));
    EXPECT_EQ(V1.rank(), static_cast<int>(p));
    EXPECT_EQ(V3.rank(), static_cast<int>(p) - 1);
    for (int i = 0; i <= 6; ++i) {
      EXPECT_EQ(group_cohomology(V1, i), i == 0 ? free_of(1) : AbDescriptor{}) << p << " " << i;
      EXPECT_EQ(group_cohomology(V2, i), i == 0 ? free_of(1) : (i % 2 ? AbDescriptor{} : tors(1))) << p << " " << i;
      EXPECT_EQ(group_cohomology(V3, i), i % 2 ? tors(1) : AbDescriptor{}) << p << " " << i;
    }
  }
}

TEST(Lattice, HellerReinerRoundTrip) {
  for (u64 p : {2, 3, 5}) {
    Rng rng(p * 7919);
    for (int it = 0; it < 50; ++it) {
      int a, b, c, n;
      do {
        a = static_cast<int>(rng.below(6));
        b = static_cast<int>(rng.below(8));
        c = static_cast<int>(rng.below(6));
        n = static_cast<int>(p) * a + b + (static_cast<int>(p) - 1) * c;
      } while (n > 30 || n == 0);
      auto M = make_lattice(p, 8, model_matrix(p, a, b, c));
      auto V = conjugate(M, random_unimodular(M.ring(), n, rng));
      auto d = heller_reiner(V);
      ASSERT_EQ(std::make_tuple(d.a, d.b, d.c), std::make_tuple(a, b, c)) << "p=" << p << " it=" << it;
    }
  }
}

TEST(Lattice, CohomologyIsAdditive) {
  auto A = make_lattice(3, 8, model_matrix(3, 1, 0, 2));
  auto B = make_lattice(3, 8, model_matrix(3, 0, 3, 1));
  auto S = direct_sum(A, B);
  for (int i = 0; i <= 4; ++i) {
    auto x = group_cohomology(A, i), y = group_cohomology(B, i), z = group_cohomology(S, i);
    EXPECT_EQ(z.free_rank, x.free_rank + y.free_rank);
    EXPECT_EQ(z.torsion.size(), x.torsion.size() + y.torsion.size());
  }
}

TEST(Lattice, E2TagsMatchDecomposition) {
  for (u64 p : {2, 3}) {
    Rng rng(p);
    auto M0 = make_lattice(p, 8, model_matrix(p, 1, 2, 1));
    auto M1 = make_lattice(p, 8, model_matrix(p, 2, 0, 3));
    auto pi0 = conjugate(M0, random_unimodular(M0.ring(), M0.rank(), rng));
    auto pi1 = conjugate(M1, random_unimodular(M1.ring(), M1.rank(), rng));
    auto E = e2_page(pi0, pi1, 8);
    EXPECT_TRUE(E.tags_match);
    EXPECT_TRUE(E.periodic);
    EXPECT_TRUE(E.generated_low);
    int free = 0, tor = 0, proj = 0;
    for (auto& t : E.tags) {
      if (t.kind == "free") free += t.count;
      if (t.kind == "tors") tor += t.count;
      if (t.kind == "P") proj += t.count;
    }
    EXPECT_EQ(free, 2);
    EXPECT_EQ(tor, 4);
    EXPECT_EQ(proj, 3);
    // column t = 0: b = 2 copies of Z/p in every even s >= 2, c = 1 in odd s
    EXPECT_EQ(E.cells[4][0], tors(2));
    EXPECT_EQ(E.cells[5][0], tors(1));
    EXPECT_EQ(E.cells[0][1], free_of(2));
  }
}

TEST(Lattice, RejectsNonLattices) {
  EXPECT_THROW(make_lattice(3, 8, std::vector<std::vector<i64>>{{2}}), InputError);
  EXPECT_THROW(make_lattice(2, 8, std::vector<std::vector<i64>>{{1, 1}, {0, 1}}), InputError);
  EXPECT_THROW(make_lattice(2, 8, std::vector<std::vector<i64>>{{1, 0}}), InputError);
}

TEST(Lattice, PrecisionRetry) {
  auto V = make_lattice(3, 1, v2_matrix(3));
  EXPECT_THROW(heller_reiner(V), PrecisionExhausted);
  auto d = with_precision_retry(3, 1, [](int k) { return heller_reiner(make_lattice(3, k, v2_matrix(3))); });
  EXPECT_EQ(d.b, 1);
}

TEST(Lattice, JsonRoundTrip) {
  auto M = make_lattice(5, 8, model_matrix(5, 1, 1, 1));
  Rng rng(2);
  auto V = conjugate(M, random_unimodular(M.ring(), M.rank(), rng));
  auto W = lattice_from_json(to_json(V));
  EXPECT_TRUE(W.T == V.T);
  auto d = heller_reiner(W);
  EXPECT_EQ(std::make_tuple(d.a, d.b, d.c), std::make_tuple(1, 1, 1));
}
