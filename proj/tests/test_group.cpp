#include <gtest/gtest.h>

#include "kq/gset.hpp"
#include "kq/io.hpp"

using namespace kq;

namespace {

// (order, classes, subgroup classes) for the zoo, from standard tables
struct ZooRow {
  const char* name;
  int order, classes, subgroup_classes;
};

const ZooRow kZoo[] = {
    {"trivial", 1, 1, 1}, {"Z/2", 2, 2, 2},  {"Z/6", 6, 6, 4},   {"Z/16", 16, 16, 5}, {"Z2xZ2", 4, 4, 5},
    {"Z4xZ2", 8, 8, 8},   {"D4", 8, 5, 8},   {"Q8", 8, 5, 6},    {"S3", 6, 3, 4},     {"A4", 12, 4, 5},
    {"S4", 24, 5, 11},    {"A5", 60, 5, 9},
};

}  // namespace

TEST(GroupCore, ZooInvariants) {
  for (auto& z : kZoo) {
    auto G = builtin_group(z.name);
    EXPECT_EQ(G->order(), z.order) << z.name;
    EXPECT_EQ(G->num_classes(), z.classes) << z.name;
    EXPECT_EQ(static_cast<int>(subgroup_class_reps(*G).size()), z.subgroup_classes) << z.name;
  }
}

TEST(GroupCore, ClassEquationAndCentralizers) {
  for (auto& n : builtin_group_names()) {
    auto G = builtin_group(n);
    int sum = 0;
    for (int c = 0; c < G->num_classes(); ++c) {
      const auto& cc = G->classes()[c];
      sum += cc.size();
      EXPECT_EQ(cc.size() * centralizer(*G, cc.representative).order(), G->order()) << n;
      EXPECT_EQ(cc.representative, *std::min_element(cc.members.begin(), cc.members.end()));
      for (int x : cc.members) EXPECT_EQ(G->element_order(x), cc.element_order);
    }
    EXPECT_EQ(sum, G->order()) << n;
  }
}

TEST(GroupCore, PDecompositionCommutesAndMultiplies) {
  auto G = builtin_group("S4");
  for (u64 p : {2, 3})
    for (int g = 0; g < G->order(); ++g) {
      auto [a, b] = p_decomposition(*G, g, p);
      EXPECT_EQ(G->mul(a, b), g);
      EXPECT_TRUE(G->commute(a, b));
      EXPECT_TRUE(is_p_power(G->element_order(a), p));
      EXPECT_NE(G->element_order(b) % p, 0u);
    }
}

TEST(GroupCore, SylowOrders) {
  auto G = builtin_group("S4");
  EXPECT_EQ(sylow_subgroup(*G, 2).order(), 8);
  EXPECT_EQ(sylow_subgroup(*G, 3).order(), 3);
  auto A5 = builtin_group("A5");
  EXPECT_EQ(sylow_subgroup(*A5, 5).order(), 5);
}

TEST(GroupCore, CommutingPairCounts) {
  // all pairs (p = a prime not dividing |G| would restrict u to 1; use brute force instead)
  for (const char* name : {"S3", "D4", "Q8", "A4"}) {
    auto G = builtin_group(name);
    for (u64 p : {2, 3}) {
      // brute force: orbits of G on commuting pairs with u a p-element, by Burnside
      int n = G->order();
      i64 fixed = 0;
      for (int x = 0; x < n; ++x)
        for (int u = 0; u < n; ++u) {
          if (!is_p_power(G->element_order(u), p) || G->conj(x, u) != u) continue;
          for (int g = 0; g < n; ++g)
            if (G->commute(u, g) && G->conj(x, g) == g) ++fixed;
        }
      EXPECT_EQ(static_cast<i64>(commuting_pair_classes(*G, p).size()) * n, fixed) << name << " p=" << p;
    }
  }
}

TEST(GroupCore, RejectsBadTables) {
  EXPECT_THROW(FiniteGroup("x", {{0, 1}, {0, 1}}), InputError);
  EXPECT_THROW(FiniteGroup("x", {{1, 0}, {0, 1}}), InputError);
  // a Latin square that is not associative
  std::vector<std::vector<int>> t{{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  EXPECT_THROW(FiniteGroup("loop", t), InputError);
  EXPECT_THROW(builtin_group("Z/17"), InputError);
  EXPECT_THROW(builtin_group("GL2"), InputError);
}

TEST(GroupCore, JsonIngestion) {
  json a = json::parse(R"j({"name":"S3p","degree":3,"generators":["(1 2 3)","(1 2)"]})j");
  auto G = group_from_json(a);
  EXPECT_EQ(G->order(), 6);
  EXPECT_EQ(G->num_classes(), 3);
  json b{{"name", "tab"}, {"order", 6}, {"mult_table", G->table()}};
  auto H = group_from_json(b);
  EXPECT_EQ(H->num_classes(), 3);
  json bad = json::parse(R"({"name":"x"})");
  EXPECT_THROW(group_from_json(bad), InputError);
}

TEST(GSet, AxiomsAndFixedPoints) {
  auto G = builtin_group("D4");
  auto Y = all_cosets(G);
  int expect = 0;
  for (auto& H : subgroup_class_reps(*G)) expect += G->order() / H.order();
  EXPECT_EQ(Y.size(), expect);
  EXPECT_EQ(Y.num_orbits(), static_cast<int>(subgroup_class_reps(*G).size()));
  for (int x = 0; x < Y.size(); ++x) {
    int t = Y.transporter(x);
    EXPECT_EQ(Y.act(t, Y.orbit_reps()[Y.orbit_of(x)]), x);
    EXPECT_EQ(Y.stabilizer(x).order() * static_cast<int>(Y.orbit(Y.orbit_of(x)).size()), G->order());
  }
  // Burnside: orbits = average fixed points
  auto YY = product(Y, Y);
  i64 fix = 0;
  for (int g = 0; g < G->order(); ++g) fix += YY.fixed_points(g).size();
  EXPECT_EQ(fix, static_cast<i64>(YY.num_orbits()) * G->order());
}

TEST(GSet, JsonAndBuiltins) {
  auto G = builtin_group("S3");
  // the action of S3 on the cosets of an order-2 subgroup, written out for two generators
  int r = G->classes()[parse_class(*G, "3a")].representative, t = G->classes()[parse_class(*G, "2a")].representative;
  auto C = coset_space(G, closure(*G, {t}));
  json action = json::object();
  for (int g : {r, t}) {
    std::vector<int> img;
    for (int x = 0; x < C.size(); ++x) img.push_back(C.act(g, x));
    action[std::to_string(g)] = img;
  }
  auto X = gset_from_json(G, json{{"points", 3}, {"action", action}});
  EXPECT_EQ(X.num_orbits(), 1);
  for (int g = 0; g < G->order(); ++g) EXPECT_EQ(X.fixed_points(g).size(), C.fixed_points(g).size());
  EXPECT_EQ(load_gset(G, "point").size(), 1);
  EXPECT_EQ(load_gset(G, "regular").size(), 6);
  EXPECT_EQ(load_gset(G, "cosets:" + std::to_string(t)).size(), 3);
  EXPECT_EQ(load_gset(G, "cosets:" + std::to_string(r)).size(), 2);
  json bad = json::parse(R"({"points":2,"action":{"1":[0,0]}})");
  EXPECT_THROW(gset_from_json(G, bad), InputError);
  EXPECT_THROW(load_gset(G, "nowhere"), InputError);
}

TEST(GroupCore, ClassParsing) {
  auto G = builtin_group("S3");
  EXPECT_EQ(parse_class(*G, "t2"), parse_class(*G, "2a"));
  EXPECT_EQ(G->classes()[parse_class(*G, "t3")].element_order, 3);
  EXPECT_EQ(parse_class(*G, "c1"), 1);
  EXPECT_THROW(parse_class(*G, "t5"), InputError);
}
