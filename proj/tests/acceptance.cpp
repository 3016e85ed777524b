// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "kq/charring.hpp"
#include "kq/convcat.hpp"
#include "kq/koszul.hpp"
#include "kq/lattices.hpp"
#include "kq/steenrod.hpp"
#include "oracles.hpp"

using namespace kq;

namespace {

// precision for every exact check: results are compared mod p^kPrecision
constexpr int kPrecision = 8;

// runtime budgets in seconds
constexpr double kBudget[13] = {0, 10, 5, 60, 60, 5, 5, 300, 30, 60, 60, 30, 60};

constexpr int kKrullSchmidtSeeds = 5;
constexpr int kLatticeTrials = 50;
constexpr int kLatticeMaxRank = 30;

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void require(bool c, const std::string& what) {
    if (!c) {
      if (ok) note << "failed: ";
      else note << "; ";
      note << what;
      ok = false;
    }
  }
};

using Cases = std::vector<std::pair<std::string, u64>>;

Cases with_primes(std::initializer_list<const char*> names) {
  Cases out;
  for (const char* n : names)
    for (u64 p : {2, 3, 5, 7})
      if (builtin_group(n)->order() % p == 0) out.push_back({n, p});
  return out;
}

std::string tag(const std::string& g, u64 p) { return g + "/p" + std::to_string(p); }

void c1(Outcome& o) {
  int n = 0;
  for (auto& [name, p] : with_primes({"Z/4", "Z2xZ2", "D4", "Q8", "S3", "A4", "S4"})) {
    Atlas at(builtin_group(name));
    const ZqRing& R = default_ring(at.group(), p, kPrecision);
    RepRing RR(at, R);
    auto E = RR.idempotent_suite();
    o.require(E.size() == p_prime_classes(at.group(), p).size(), tag(name, p) + " count");
    Vec s = zero_vec(R, RR.rank());
    for (size_t i = 0; i < E.size(); ++i) {
      for (int t = 0; t < RR.rank(); ++t) s[t] += E[i][t];
      for (size_t j = 0; j < E.size(); ++j) {
        Vec x = RR.mul(E[i], E[j]);
        o.require(i == j ? x == E[i] : is_zero(x), tag(name, p) + " orthogonality");
      }
      o.require(RR.is_primitive(E[i]), tag(name, p) + " primitive");
    }
    o.require(s == RR.unit(), tag(name, p) + " complete");
    ++n;
  }
  o.note << n << " group/prime pairs";
}

void c2(Outcome& o) {
  int n = 0;
  for (auto& [name, p] : with_primes({"Z/4", "Z2xZ2", "D4", "Q8", "S3", "A4", "S4"})) {
    Atlas at(builtin_group(name));
    RepRing RR(at, default_ring(at.group(), p, kPrecision));
    auto K = kuhn_ideal(RR);
    o.require(K.quotient_rank == static_cast<int>(p_power_classes(at.group(), p).size()), tag(name, p) + " rank");
    o.require(K.kernel_snf == K.image_snf && K.lattices_equal, tag(name, p) + " constructions");
    ++n;
  }
  o.note << n << " group/prime pairs";
}

void c3(Outcome& o) {
  int checked = 0;
  for (auto& [name, p] : with_primes({"Z/4", "Z2xZ2", "D4", "Q8", "S3", "A4", "Z/6", "S4"})) {
    auto G = builtin_group(name);
    Atlas at(G);
    CharRing CR(at, default_ring(*G, p, kPrecision));
    o.require(CR.rank() == oracle::commuting_pairs(*G, p), tag(name, p) + " rank");
    o.require(evaluation_rank(CR) == CR.rank(), tag(name, p) + " evaluation rank");
    if (G->order() > 12) continue;
    const auto& E = CR.enriched();
    for (auto& e : E) o.require(CR.chi(e, CR.unit()) == CycNum(mpq_class(1)), tag(name, p) + " unital");
    size_t n = CR.generators().size();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        auto c = CR.convolve(CR.generator(i), CR.generator(j));
        for (auto& e : E) {
          o.require(CR.chi(e, c) == CR.chi(e, CR.generator(i)) * CR.chi(e, CR.generator(j)), tag(name, p) + " multiplicative");
          ++checked;
        }
      }
  }
  o.note << checked << " character evaluations of products";
}

void c4(Outcome& o) {
  for (auto& [name, p] : Cases{{"S3", 2}, {"S3", 3}, {"S4", 2}, {"A4", 2}}) {
    auto G = builtin_group(name);
    Atlas at(G);
    CharRing CR(at, default_ring(*G, p, kPrecision));
    auto S = compute_spectrum(CR);
    o.require(S.partitions_agree, tag(name, p) + " partitions");
    o.require(S.num_congruence_classes == static_cast<int>(S.blocks.blocks.size()), tag(name, p) + " maximal primes");
    o.note << tag(name, p) << ":" << S.blocks.blocks.size() << " ";
  }
}

void c5(Outcome& o) {
  for (const char* name : {"Z/2", "Z/4", "Z2xZ2"}) {
    auto G = builtin_group(name);
    Atlas at(G);
    CharRing CR(at, default_ring(*G, 2, kPrecision));
    auto r = abelian_iso_check(CR);
    o.require(r.structure_constants_match && r.rank == G->order() * G->order(), name);
  }
}

void c6(Outcome& o) {
  for (int p : {2, 3})
    for (int e = 1; e <= 3; ++e) {
      int n = static_cast<int>(ipow(p, e));
      FinAbGroup A({n});
      auto E = standard_cocycle(A);
      o.require(is_cocycle(E).ok && class_order(E) == n, "Z/" + std::to_string(n) + " order");
      auto D = diagonal_restricted_cocycle(A);
      auto w = coboundary_witness(D);
      bool ok = w.has_value();
      if (ok)
        for (int a = 0; a < A.order() && ok; ++a)
          for (int b = 0; b < A.order() && ok; ++b) {
            mpq_class d = (*w)[a] + (*w)[b] - (*w)[A.add(a, b)] - D(a, b);
            ok = d.get_den() == 1;
          }
      o.require(ok, "Z/" + std::to_string(n) + " diagonal witness");
    }
}

void c7(Outcome& o) {
  for (auto& [name, p] : Cases{{"Z/2", 2}, {"Z/3", 3}, {"Z/4", 2}, {"Z2xZ2", 2}, {"S3", 2}, {"S3", 3}, {"D4", 2}}) {
    auto G = builtin_group(name);
    Atlas at(G);
    auto Y = all_cosets(G);
    auto End = end_algebra(at, Y, default_ring(*G, p, kPrecision), false);
    auto D = decompose_object(at, End, 1);
    int want = oracle::pperm_total(*G, p);
    o.require(D.total_classes() == want && D.classical_total() == want, tag(name, p) + " count");
    for (auto& c : D.components) o.require(c.labels_bijective, tag(name, p) + " trace labels");
    for (int s = 1; s <= kKrullSchmidtSeeds; ++s) {
      auto D2 = decompose_object(at, End, 1000 + s, 7919 * s, &D);
      o.require(D2.label_multiset() == D.label_multiset(), tag(name, p) + " Krull-Schmidt seed " + std::to_string(s));
    }
    o.note << tag(name, p) << ":" << D.total_classes() << "(unreduced " << oracle::pperm_total_unreduced(*G, p) << ") ";
  }
}

void c8(Outcome& o) {
  int n = 0;
  for (auto& [name, p] : Cases{{"Z/2", 2}, {"Z/3", 3}, {"Z2xZ2", 2}, {"S3", 2}, {"S3", 3}, {"D4", 2}}) {
    auto G = builtin_group(name);
    Atlas at(G);
    const ZqRing& R = default_ring(*G, p, kPrecision);
    auto reps = subgroup_class_reps(*G);
    for (int cls : p_prime_classes(*G, p)) {
      for (auto& H : reps)
        for (auto& K : reps) {
          auto u = beta_unimodularity(beta_map(at, product(coset_space(G, H), coset_space(G, K)), cls, R));
          o.require(u.unimodular && u.source_rank == u.target_rank, tag(name, p));
          ++n;
        }
    }
  }
  auto G = builtin_group("S3");
  Atlas at(G);
  auto u = beta_unimodularity(beta_map(at, regular_gset(G), parse_class(*G, "3a"), default_ring(*G, 2, kPrecision)));
  o.require(u.source_rank == 0 && u.target_rank == 0 && u.unimodular, "empty fixed points");
  o.note << n << " beta matrices";
}

void c9(Outcome& o) {
  for (const char* name : {"S3", "D4"}) {
    auto G = builtin_group(name);
    Atlas at(G);
    auto Y = all_cosets(G);
    HomSpace H(at, Y, Y);
    int dim = lusztig_dimension(at, Y);
    o.require(H.rank() == dim && lusztig_joint_rank(H) == dim, name);
    o.note << name << ":" << dim << " ";
  }
}

void c10(Outcome& o) {
  auto tors = [](size_t n) { return AbDescriptor{0, std::vector<int>(n, 1)}; };
  for (u64 p : {2, 3, 5}) {
    auto V1 = make_lattice(p, kPrecision, v1_matrix(p));
    auto V2 = make_lattice(p, kPrecision, v2_matrix(p));
    auto V3 = make_lattice(p, kPrecision, v3_matrix(p));
    for (int i = 0; i <= 6; ++i) {
      AbDescriptor w1 = i == 0 ? AbDescriptor{1, {}} : AbDescriptor{};
      AbDescriptor w2 = i == 0 ? AbDescriptor{1, {}} : (i % 2 ? AbDescriptor{} : tors(1));
      AbDescriptor w3 = i % 2 ? tors(1) : AbDescriptor{};
      o.require(group_cohomology(V1, i) == w1 && group_cohomology(V2, i) == w2 && group_cohomology(V3, i) == w3,
                "cohomology p=" + std::to_string(p) + " H^" + std::to_string(i));
    }
    Rng rng(p * 104729);
    for (int it = 0; it < kLatticeTrials; ++it) {
      int a, b, c, n;
      do {
        a = static_cast<int>(rng.below(6));
        b = static_cast<int>(rng.below(9));
        c = static_cast<int>(rng.below(7));
        n = static_cast<int>(p) * a + b + (static_cast<int>(p) - 1) * c;
      } while (n == 0 || n > kLatticeMaxRank);
      auto M = make_lattice(p, kPrecision, model_matrix(p, a, b, c));
      auto V = conjugate(M, random_unimodular(M.ring(), n, rng));
      auto d = heller_reiner(V);
      o.require(d.a == a && d.b == b && d.c == c, "round trip p=" + std::to_string(p));
      if (it % 10 == 0) {
        auto E = e2_page(V, std::nullopt, 8);
        o.require(E.tags_match && E.periodic && E.generated_low, "E2 tags p=" + std::to_string(p));
      }
    }
  }
  o.note << 3 * kLatticeTrials << " random conjugates";
}

void c11(Outcome& o) {
  auto f = parse_poly("x^4+(x+y+z)*x*y*z");
  auto r = carlsson_check(f);
  o.require(r.sq1_zero && !r.sq3_divisible, "carlsson_check");
  int mons = 0;
  for (int d = 0; d <= 8; ++d)
    for (auto& m : monomials_of_degree(3, d)) {
      auto g = F2Poly::monomial(m);
      o.require(sq(3, g) == sq3_adem(g), "Adem " + g.str());
      ++mons;
    }
  auto found = search_candidates(3, 4);
  std::array<int, 3> perm{0, 1, 2};
  bool hit = false;
  do {
    auto g = permute_vars(f, {perm.begin(), perm.end()});
    hit = hit || std::find(found.begin(), found.end(), g) != found.end();
  } while (std::next_permutation(perm.begin(), perm.end()));
  o.require(hit, "(3,4) search");
  o.note << mons << " monomials, " << found.size() << " candidates in degree 4";
}

std::string run_capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) {
    status = -1;
    return out;
  }
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  status = pclose(f);
  return out;
}

std::string cli_path, data_dir;

void c12(Outcome& o) {
  if (cli_path.empty()) {
    o.require(false, "no CLI path");
    return;
  }
  const std::vector<std::string> cmds{
      "chartable --group A5",
      "blocks --group S4 --p 2",
      "bonnafe --group S3 --p 3 --class 2a",
      "kuhn --group S3 --p 3",
      "kq0 --group S4 --p 2 --gset all-cosets",
      "charring --group S3 --p 2 --spectrum --support point",
      "specialize --group A4 --p 2",
      "support --group S3 --p 2 --gset regular",
      "koszul --group Z/8 --p 2 --check-diagonal",
      "pperm decompose --group S3 --p 2 --gset all-cosets --seed 5",
      "pperm classify --group D4 --p 2",
      "lattice decompose --p 3 --model 2,1,3 --seed 9",
      "lattice e2 --pi0 " + data_dir + "/lattice_p2_a.json --pi1 " + data_dir + "/lattice_p2_b.json",
      "carlsson --f 'x^4+(x+y+z)*x*y*z' --search 3,4",
      "selftest",
      "kuhn --group S3 --p 3 --format tsv",
      "blocks --group S3 --p 2 --jobs 4",
  };
  double worst = 0;
  for (auto& c : cmds) {
    std::string line = "'" + cli_path + "' " + c + " 2>&1";
    int s1, s2;
    auto t0 = std::chrono::steady_clock::now();
    auto a = run_capture(line, s1);
    auto t1 = std::chrono::steady_clock::now();
    auto b = run_capture(line, s2);
    auto t2 = std::chrono::steady_clock::now();
    worst = std::max(worst, std::abs(std::chrono::duration<double>((t2 - t1) - (t1 - t0)).count()));
    o.require(s1 == 0 && s2 == 0 && a == b && !a.empty(), c);
  }
  o.require(worst <= 1.0, "rerun overhead above 1 s");
  o.note << cmds.size() << " commands, max rerun spread " << worst << " s";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];
  if (argc > 2) data_dir = argv[2];
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"block/idempotent suite", c1}, {"Kuhn ranks", c2},         {"character ring", c3},
      {"spectrum/Brauer", c4},        {"abelian duality", c5},    {"Koszul cocycle", c6},
      {"p-permutation bijection", c7}, {"beta isomorphism", c8},   {"Lusztig splitting", c9},
      {"lattice suite", c10},         {"Carlsson obstruction", c11}, {"determinism", c12}};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > kBudget[i + 1]) o.require(false, "over time budget");
    std::printf("criterion %zu: %s  %-24s %.2fs/%.0fs  %s\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].first, dt,
                kBudget[i + 1], o.note.str().c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
