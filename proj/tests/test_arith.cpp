#include <gtest/gtest.h>

#include "kq/io.hpp"
#include "kq/zq.hpp"

using namespace kq;

TEST(Zq, FieldAxiomsOnSamples) {
  for (auto [p, f, k] : std::vector<std::tuple<u64, int, int>>{{2, 1, 8}, {2, 3, 8}, {3, 2, 8}, {5, 2, 6}, {7, 1, 10}}) {
    const ZqRing& R = ZqRing::get(p, f, k);
    Rng rng(p * 131 + f);
    for (int it = 0; it < 200; ++it) {
      std::vector<u64> a(f), b(f), c(f);
      for (int i = 0; i < f; ++i) {
        a[i] = rng.below(R.modulus());
        b[i] = rng.below(R.modulus());
        c[i] = rng.below(R.modulus());
      }
      ZqElem x = R.from_coeffs(a), y = R.from_coeffs(b), z = R.from_coeffs(c);
      EXPECT_EQ((x * y) * z, x * (y * z));
      EXPECT_EQ(x * (y + z), x * y + x * z);
      EXPECT_EQ(x - x, R.zero());
      if (x.is_unit()) {
        EXPECT_EQ(x * x.inverse(), R.one());
      }
    }
  }
}

TEST(Zq, TeichmullerOrders) {
  for (auto [p, f] : std::vector<std::pair<u64, int>>{{2, 2}, {2, 3}, {3, 2}, {5, 1}, {3, 3}}) {
    const ZqRing& R = ZqRing::get(p, f, 8);
    ZqElem t = R.generator();
    u64 q = R.q();
    EXPECT_EQ(t.pow(q - 1), R.one());
    for (u64 r : prime_factors(q - 1)) EXPECT_NE(t.pow((q - 1) / r), R.one()) << p << "^" << f;
    // Teichmuller elements are fixed by x -> x^q
    EXPECT_EQ(t.pow(q), t);
  }
}

TEST(Zq, ValuationAndReduction) {
  const ZqRing& R = ZqRing::get(3, 2, 6);
  EXPECT_EQ(R.from_int(9).valuation(), 2);
  EXPECT_EQ(R.from_int(18).valuation(), 2);
  EXPECT_FALSE(R.from_int(3).is_unit());
  EXPECT_EQ(R.from_int(10).reduce_to(R.residue()), R.residue().one());
  EXPECT_THROW(R.from_rational(mpq_class(1, 3)), NotPIntegral);
  EXPECT_EQ(R.from_rational(mpq_class(1, 2)) * R.from_int(2), R.one());
}

TEST(Zq, AutoQExponent) {
  EXPECT_EQ(auto_q_exponent(2, 3), 2);
  EXPECT_EQ(auto_q_exponent(2, 7), 3);
  EXPECT_EQ(auto_q_exponent(3, 4), 2);
  EXPECT_EQ(auto_q_exponent(5, 4), 1);
  EXPECT_EQ(auto_q_exponent(3, 1), 1);
  EXPECT_THROW(auto_q_exponent(3, 6), DivisibilityError);
}

TEST(Zq, PrecisionRetryDoubles) {
  std::vector<int> seen;
  int got = with_precision_retry(3, 4, [&](int k) {
    seen.push_back(k);
    if (k < 16) throw PrecisionExhausted("more");
    return k;
  });
  EXPECT_EQ(got, 16);
  EXPECT_EQ(seen, (std::vector<int>{4, 8, 16}));
  EXPECT_THROW(with_precision_retry(2, 8, [](int) -> int { throw PrecisionExhausted("never"); }), PrecisionExhausted);
}

TEST(Cyclotomic, RootsOfUnityAndGalois) {
  CycNum z = CycNum::zeta(12);
  CycNum one(mpq_class(1));
  CycNum p = one;
  for (int i = 0; i < 12; ++i) p = p * z;
  EXPECT_EQ(p, one);
  EXPECT_EQ(z * z * z, CycNum::zeta(4));
  // sum of primitive 5th roots is -1
  CycNum s;
  for (int j = 1; j < 5; ++j) s += CycNum::zeta(5, j);
  EXPECT_EQ(s, CycNum(mpq_class(-1)));
  EXPECT_EQ(z.conj() * z, one);
  EXPECT_EQ(z.galois(5), CycNum::zeta(12, 5));
  CycNum a = one + CycNum::zeta(5);
  EXPECT_EQ(a * inverse(a), one);
}

TEST(Cyclotomic, DescendAndMinimalForm) {
  CycNum w = CycNum::zeta(12, 4);  // zeta_3
  CycNum d = descend(w, 3);
  EXPECT_EQ(d.conductor(), 3);
  EXPECT_EQ(d, CycNum::zeta(3));
  EXPECT_EQ(minimal_form(CycNum(mpq_class(3, 2), 8)).conductor(), 1);
}

TEST(Cyclotomic, EmbeddingIsARingMap) {
  const ZqRing& R = ZqRing::get(2, 2, 8);  // contains 3rd roots of unity
  Rng rng(3);
  for (int it = 0; it < 50; ++it) {
    CycNum a, b;
    for (int j = 0; j < 3; ++j) {
      a += CycNum::zeta(3, j) * CycNum(mpq_class(static_cast<long>(rng.below(21)) - 10, 3));
      b += CycNum::zeta(3, j) * CycNum(mpq_class(static_cast<long>(rng.below(21)) - 10, 5));
    }
    EXPECT_EQ(embed_cyc_to_zq(a * b, R), embed_cyc_to_zq(a, R) * embed_cyc_to_zq(b, R));
    EXPECT_EQ(embed_cyc_to_zq(a + b, R), embed_cyc_to_zq(a, R) + embed_cyc_to_zq(b, R));
  }
  EXPECT_THROW(embed_cyc_to_zq(CycNum::zeta(5), R), DivisibilityError);
}

TEST(Serialization, RoundTrips) {
  const ZqRing& R = ZqRing::get(3, 2, 8);
  ZqElem x = R.generator().pow(5) + R.from_int(7);
  json j = to_json(x);
  EXPECT_EQ(j["p"], 3);
  EXPECT_EQ(j["h"].size(), 3u);
  EXPECT_EQ(zq_from_json(j), x);
  CycNum a = CycNum::zeta(8) * CycNum(mpq_class(3, 4)) + CycNum(mpq_class(-1, 3));
  EXPECT_EQ(cyc_from_json(to_json(a)), a);
  json bad = json::parse(R"({"n":4,"num":[1],"den":[1,2]})");
  EXPECT_THROW(cyc_from_json(bad), InputError);
}
