#include <gtest/gtest.h>

#include <numeric>

#include "kq/steenrod.hpp"

using namespace kq;

namespace {

const char* kF = "x^4+(x+y+z)*x*y*z";

// every nonzero subset of degree-d monomials, filtered by brute force
std::vector<F2Poly> brute_candidates(int vars, int d) {
  auto mons = monomials_of_degree(vars, d);
  std::vector<F2Poly> out;
  for (std::uint64_t s = 1; s < (1ull << mons.size()); ++s) {
    F2Poly f(vars);
    for (size_t j = 0; j < mons.size(); ++j)
      if (s >> j & 1) f.toggle(mons[j]);
    if (!sq(1, f).is_zero()) continue;
    // divisibility via the quotient: f * q == Sq^3 f
    F2Poly q(vars);
    if (!divides(f, sq(3, f), &q)) {
      out.push_back(f);
    } else {
      EXPECT_EQ(f * q, sq(3, f));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Steenrod, CarlssonPolynomial) {
  auto r = carlsson_check(parse_poly(kF));
  EXPECT_TRUE(r.sq1_zero);
  EXPECT_FALSE(r.sq3_divisible);
  EXPECT_EQ(r.sq3.degree(), 7);
}

TEST(Steenrod, AdemAgreesOnMonomials) {
  for (int d = 0; d <= 8; ++d)
    for (auto& m : monomials_of_degree(3, d)) {
      auto f = F2Poly::monomial(m);
      ASSERT_EQ(sq(3, f), sq3_adem(f)) << f.str();
    }
}

TEST(Steenrod, SquaresOfLowDegree) {
  auto x = F2Poly::var(3, 0);
  EXPECT_EQ(sq(0, x), x);
  EXPECT_EQ(sq(1, x), x * x);
  EXPECT_TRUE(sq(2, x).is_zero());
  // Sq^k f = f^2 when k = deg f
  auto f = parse_poly("x*y + z^2");
  EXPECT_EQ(sq(2, f), f * f);
  EXPECT_TRUE(sq(3, f).is_zero());
}

TEST(Steenrod, CartanFormula) {
  auto f = parse_poly("x^2*y + y*z^2 + x*y*z");
  auto g = parse_poly("x + z");
  for (int k = 0; k <= 5; ++k) {
    F2Poly rhs(3);
    for (int i = 0; i <= k; ++i) rhs = rhs + sq(i, f) * sq(k - i, g);
    EXPECT_EQ(sq(k, f * g), rhs) << k;
  }
}

TEST(Steenrod, AdemRelationSq1Sq1) {
  for (int d = 0; d <= 6; ++d)
    for (auto& m : monomials_of_degree(3, d)) EXPECT_TRUE(sq(1, sq(1, F2Poly::monomial(m))).is_zero());
}

TEST(Steenrod, NoCandidatesInFewVariables) {
  for (int d = 0; d <= 6; ++d) {
    EXPECT_TRUE(brute_candidates(1, d).empty()) << d;
    EXPECT_TRUE(brute_candidates(2, d).empty()) << d;
    EXPECT_TRUE(search_candidates(1, d).empty()) << d;
    EXPECT_TRUE(search_candidates(2, d).empty()) << d;
  }
}

TEST(Steenrod, SearchFindsTheClass) {
  auto found = search_candidates(3, 4);
  EXPECT_EQ(found, brute_candidates(3, 4));
  ASSERT_FALSE(found.empty());
  auto f = parse_poly(kF);
  std::vector<int> perm{0, 1, 2};
  bool hit = false;
  do {
    auto g = permute_vars(f, perm);
    hit = hit || std::find(found.begin(), found.end(), g) != found.end();
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_TRUE(hit);
  for (auto& g : found) {
    auto r = carlsson_check(g);
    EXPECT_TRUE(r.sq1_zero && !r.sq3_divisible);
  }
}

TEST(Steenrod, Division) {
  auto f = parse_poly("x + y");
  auto g = parse_poly("x^2 + y^2");
  F2Poly q(3);
  ASSERT_TRUE(divides(f, g, &q));
  EXPECT_EQ(q, f);
  EXPECT_FALSE(divides(parse_poly("x*y"), parse_poly("x^2 + y^2")));
}

TEST(Parser, Grammar) {
  EXPECT_EQ(parse_poly("x*x"), parse_poly("x^2"));
  EXPECT_EQ(parse_poly("x + x"), F2Poly(3));
  EXPECT_EQ(parse_poly("3*x"), parse_poly("x"));
  EXPECT_EQ(parse_poly("2*y"), F2Poly(3));
  EXPECT_EQ(parse_poly("(x+y)^2"), parse_poly("x^2+y^2"));
  EXPECT_EQ(parse_poly(kF).size(), 4u);
  EXPECT_THROW(parse_poly("x y"), InputError);
  EXPECT_THROW(parse_poly("w"), InputError);
  EXPECT_THROW(parse_poly("(x"), InputError);
  EXPECT_THROW(carlsson_check(parse_poly("x + y^2")), InputError);
}
