// kq: command-line front end to the kq library.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kq/charring.hpp"
#include "kq/convcat.hpp"
#include "kq/io.hpp"
#include "kq/koszul.hpp"
#include "kq/lattices.hpp"
#include "kq/repring.hpp"
#include "kq/steenrod.hpp"

using namespace kq;

namespace {

struct RunConfig {
  std::string group = "S3";
  u64 p = 2;
  std::string q_exp = "auto";
  int precision = 8;
  u64 seed = 1;
  std::string format = "json";
  int jobs = 1;
  std::string out;
};

int q_override(const RunConfig& cfg) {
  if (cfg.q_exp == "auto") return 0;
  try {
    int f = std::stoi(cfg.q_exp);
    if (f < 1) throw InputError("--q-exp must be positive or auto");
    return f;
  } catch (const std::logic_error&) {
    throw InputError("--q-exp must be an integer or auto");
  }
}

json ring_json(const ZqRing& R) {
  return json{{"p", R.p()}, {"f", R.f()}, {"q", R.q()}, {"k", R.k()}};
}

json class_json(const FiniteGroup& G, int c) {
  const auto& cc = G.classes()[c];
  return json{{"index", c}, {"label", class_label(G, c)}, {"size", cc.size()}, {"order", cc.element_order},
              {"representative", cc.representative}};
}

struct Context {
  RunConfig cfg;
  GroupPtr G;
  std::shared_ptr<Atlas> atlas;

  void load() {
    if (!is_prime(cfg.p)) throw InputError("p must be prime");
    if (cfg.precision < 1) throw InputError("precision must be at least 1");
    if (cfg.jobs < 1) throw InputError("--jobs must be at least 1");
    G = load_group(cfg.group);
    atlas = std::make_shared<Atlas>(G);
  }
  // checks the conductor condition before anything else runs
  const ZqRing& ring(int k) const { return default_ring(*G, cfg.p, k, q_override(cfg)); }
};

json group_header(const Context& C) {
  return json{{"group", C.G->name()}, {"order", C.G->order()}, {"p", C.cfg.p}};
}

// -------------------------------------------------------------- commands

json cmd_chartable(Context& C) {
  const auto& T = C.atlas->table();
  json j{{"group", C.G->name()}, {"order", C.G->order()}};
  json classes = json::array(), degrees = json::array(), values = json::array();
  for (int c = 0; c < C.G->num_classes(); ++c) classes.push_back(class_json(*C.G, c));
  for (int i = 0; i < T.size(); ++i) {
    degrees.push_back(T.degree(i));
    json row = json::array();
    for (auto& v : T.row(i)) row.push_back(to_json(v));
    values.push_back(row);
  }
  j["classes"] = classes;
  j["degrees"] = degrees;
  j["values"] = values;
  return j;
}

json idempotent_json(const RepRing& RR, int cls) {
  const FiniteGroup& G = RR.group();
  Vec e = RR.bonnafe_idempotent(cls);
  return json{{"class", class_label(G, cls)},
              {"idempotent", RR.mul(e, e) == e},
              {"primitive", RR.is_primitive(e)},
              {"coeffs", to_json(e)}};
}

json cmd_blocks(Context& C) {
  return with_precision_retry(C.cfg.p, C.cfg.precision, [&](int k) {
    const ZqRing& R = C.ring(k);
    RepRing RR(*C.atlas, R);
    json j = group_header(C);
    j["ring"] = ring_json(R);
    auto B = blocks_of_zqG(C.atlas->table(), R);
    json blocks = json::array();
    for (auto& b : B.blocks) blocks.push_back(b);
    j["zqG_blocks"] = blocks;
    json ids = json::array();
    auto cls = p_prime_classes(*C.G, C.cfg.p);
    auto suite = RR.idempotent_suite();
    Vec sum = zero_vec(R, RR.rank());
    bool orth = true;
    for (size_t a = 0; a < suite.size(); ++a) {
      for (int t = 0; t < RR.rank(); ++t) sum[t] += suite[a][t];
      for (size_t b = a + 1; b < suite.size(); ++b)
        if (!is_zero(RR.mul(suite[a], suite[b]))) orth = false;
    }
    for (int c : cls) ids.push_back(idempotent_json(RR, c));
    j["repring_idempotents"] = ids;
    j["orthogonal"] = orth;
    j["complete"] = sum == RR.unit();
    j["p_prime_classes"] = cls.size();
    return j;
  });
}

json cmd_bonnafe(Context& C, const std::string& cls_name) {
  return with_precision_retry(C.cfg.p, C.cfg.precision, [&](int k) {
    const ZqRing& R = C.ring(k);
    RepRing RR(*C.atlas, R);
    int cls = parse_class(*C.G, cls_name);
    if (C.G->classes()[cls].element_order % C.cfg.p == 0) throw InputError("class is not of order prime to p");
    json j = group_header(C);
    j["ring"] = ring_json(R);
    j.update(idempotent_json(RR, cls));
    return j;
  });
}

json snf_json(const std::vector<int>& v) { return json(v); }

json cmd_kuhn(Context& C) {
  return with_precision_retry(C.cfg.p, C.cfg.precision, [&](int k) {
    const ZqRing& R = C.ring(k);
    RepRing RR(*C.atlas, R);
    auto K = kuhn_ideal(RR);
    json j{{"ideal_rank", K.ideal_rank}, {"quotient_rank", K.quotient_rank}};
    j.update(group_header(C));
    j["ring"] = ring_json(R);
    j["p_power_classes"] = K.p_power_classes;
    j["kernel_snf"] = snf_json(K.kernel_snf);
    j["image_snf"] = snf_json(K.image_snf);
    j["lattices_equal"] = K.lattices_equal;
    j["is_ideal"] = K.is_ideal;
    json basis = json::array();
    for (auto& v : K.ideal_basis) basis.push_back(to_json(v));
    j["ideal_basis"] = basis;
    return j;
  });
}

json cmd_kq0(Context& C, const std::string& gset) {
  return with_precision_retry(C.cfg.p, C.cfg.precision, [&](int k) {
    const ZqRing& R = C.ring(k);
    FiniteGSet X = load_gset(C.G, gset);
    auto Q = kq0_of_gset(*C.atlas, X, R);
    json j = group_header(C);
    j["ring"] = ring_json(R);
    j["points"] = X.size();
    json orbits = json::array();
    for (auto& o : Q.orbits)
      orbits.push_back(json{{"orbit_rep", o.orbit_rep},
                            {"stabilizer_order", o.stabilizer.order()},
                            {"rank", o.quotient.quotient_rank},
                            {"lattices_equal", o.quotient.lattices_equal}});
    j["orbits"] = orbits;
    j["total_rank"] = Q.total_rank;
    return j;
  });
}

json enriched_json(const CharRing& CR, const EnrichedClass& e) {
  return json{{"u", class_label(CR.group(), e.u_class)}, {"L", e.L}};
}

json cmd_charring(Context& C, bool spectrum, const std::string& support) {
  const ZqRing& R = C.ring(C.cfg.precision);
  CharRing CR(*C.atlas, R);
  json j = group_header(C);
  j["ring"] = ring_json(R);
  j["rank"] = CR.rank();
  json pairs = json::array();
  for (auto& pr : CR.pairs().pairs()) pairs.push_back(json{{"u", pr.u}, {"g", pr.g}});
  j["basis_pairs"] = pairs;
  j["evaluation_rank"] = evaluation_rank(CR);
  if (spectrum) {
    auto S = compute_spectrum(CR);
    json minp = json::array(), incidence = json::array();
    for (auto& orb : S.minimal_primes) {
      json o = json::array();
      for (int e : orb) o.push_back(enriched_json(CR, S.enriched[e]));
      minp.push_back(o);
      incidence.push_back(S.specialization[orb.front()]);
    }
    json maxp = json::array();
    for (auto& b : S.blocks.blocks) maxp.push_back(b);
    j["minimal_primes"] = minp;
    j["maximal_primes"] = maxp;
    j["incidence"] = incidence;
    j["galois_depth"] = S.A;
    j["stable_at_next_depth"] = S.stable_at_A_plus_1;
    j["q_sensitive"] = S.q_sensitive;
    j["partitions_agree"] = S.partitions_agree;
  }
  if (!support.empty()) {
    FiniteGSet X = load_gset(C.G, support);
    json s = json::array();
    for (auto& e : CR.enriched())
      if (support_contains(CR, X, e)) s.push_back(enriched_json(CR, e));
    j["support"] = s;
  }
  return j;
}

json cmd_specialize(Context& C) {
  const ZqRing& R = C.ring(C.cfg.precision);
  CharRing CR(*C.atlas, R);
  auto S = compute_spectrum(CR);
  json j = group_header(C);
  j["ring"] = ring_json(R);
  json rows = json::array();
  for (size_t i = 0; i < S.enriched.size(); ++i) {
    json r = enriched_json(CR, S.enriched[i]);
    r["block"] = S.specialization[i];
    r["congruence_class"] = S.congruence_class[i];
    rows.push_back(r);
  }
  j["enriched"] = rows;
  j["blocks"] = S.blocks.blocks.size();
  j["congruence_classes"] = S.num_congruence_classes;
  j["partitions_agree"] = S.partitions_agree;
  return j;
}

json cmd_support(Context& C, const std::string& gset) {
  const ZqRing& R = C.ring(C.cfg.precision);
  CharRing CR(*C.atlas, R);
  FiniteGSet X = load_gset(C.G, gset);
  json j = group_header(C);
  j["points"] = X.size();
  json rows = json::array();
  for (auto& e : CR.enriched()) {
    json r = enriched_json(CR, e);
    r["in_support"] = support_contains(CR, X, e);
    rows.push_back(r);
  }
  j["enriched"] = rows;
  return j;
}

json cmd_koszul(Context& C, bool diagonal) {
  if (!C.G->is_abelian()) throw NotAbelian("koszul needs an abelian group");
  FinAbGroup A = abelian_invariants(*C.G);
  auto E = standard_cocycle(A);
  json j{{"group", C.G->name()}, {"invariants", A.factors()}};
  j["cocycle_ok"] = is_cocycle(E).ok;
  j["class_order"] = class_order(E);
  if (diagonal) {
    auto D = diagonal_restricted_cocycle(A);
    auto w = coboundary_witness(D);
    j["diagonal_witness"] = w.has_value();
  } else {
    j["diagonal_witness"] = nullptr;
  }
  return j;
}

json summands_json(const FiniteGroup& G, const ComponentDecomposition& c) {
  std::map<int, std::pair<int, int>> by_label;  // label -> (multiplicity, rank)
  for (auto& s : c.summands) {
    auto& e = by_label[s.label];
    e.first++;
    e.second = s.rank;
  }
  json rows = json::array();
  for (auto& [l, m] : by_label)
    rows.push_back(json{{"class", class_label(G, c.cls)}, {"classical_summand", l}, {"multiplicity", m.first},
                        {"rank", m.second}});
  return rows;
}

json cmd_pperm_decompose(Context& C, const std::string& gset, const std::string& cls_name) {
  return with_precision_retry(C.cfg.p, C.cfg.precision, [&](int k) {
    const ZqRing& R = C.ring(k);
    FiniteGSet X = load_gset(C.G, gset);
    auto End = end_algebra(*C.atlas, X, R);
    json j = group_header(C);
    j["ring"] = ring_json(R);
    j["points"] = X.size();
    j["end_rank"] = End.A.rank();
    std::vector<ComponentDecomposition> comps;
    auto cls = p_prime_classes(*C.G, C.cfg.p);
    if (!cls_name.empty()) {
      int c = parse_class(*C.G, cls_name);
      if (std::find(cls.begin(), cls.end(), c) == cls.end()) throw InputError("class is not of order prime to p");
      cls = {c};
    }
    for (size_t i = 0; i < cls.size(); ++i) comps.push_back(decompose_component(*C.atlas, End, cls[i], C.cfg.seed + i));
    json table = json::array(), comp = json::array();
    int total = 0, classical = 0;
    bool bij = true;
    for (auto& c : comps) {
      for (auto& r : summands_json(*C.G, c)) table.push_back(r);
      comp.push_back(json{{"class", class_label(*C.G, c.cls)},
                          {"iso_classes", c.num_classes},
                          {"summands", c.summands.size()},
                          {"classical_iso_classes", c.classical.num_classes()},
                          {"labels_bijective", c.labels_bijective}});
      total += c.num_classes;
      classical += c.classical.num_classes();
      bij = bij && c.labels_bijective;
    }
    j["components"] = comp;
    j["table"] = table;
    j["iso_classes"] = total;
    j["classical_iso_classes"] = classical;
    j["labels_bijective"] = bij;
    return j;
  });
}

json cmd_pperm_classify(Context& C) {
  return with_precision_retry(C.cfg.p, C.cfg.precision, [&](int k) {
    const ZqRing& R = C.ring(k);
    FiniteGSet Y = all_cosets(C.G);
    json j = group_header(C);
    j["ring"] = ring_json(R);
    json rows = json::array();
    int total = 0;
    for (int cls : p_prime_classes(*C.G, C.cfg.p)) {
      int c = C.G->classes()[cls].representative;
      const SubgroupData& Z = C.atlas->subgroup(centralizer(*C.G, c));
      auto [Yc, pts] = Y.fixed_points_as(Z.emb, c);
      (void)pts;
      auto D = classical_decompose(Yc, R, C.cfg.seed);
      std::vector<int> mult(D.num_classes(), 0);
      for (int i : D.D.iso_class) mult[i]++;
      for (int l = 0; l < D.num_classes(); ++l)
        rows.push_back(json{{"class", class_label(*C.G, cls)}, {"centralizer_order", Z.sub.order()},
                            {"classical_summand", l}, {"multiplicity", mult[l]}});
      total += D.num_classes();
    }
    j["table"] = rows;
    j["pairs"] = total;
    return j;
  });
}

std::tuple<int, int, int> parse_triple(const std::string& s) {
  int a, b, c;
  char x, y;
  std::istringstream in(s);
  if (!(in >> a >> x >> b >> y >> c) || x != ',' || y != ',' || a < 0 || b < 0 || c < 0)
    throw InputError("expected a,b,c with nonnegative integers");
  return {a, b, c};
}

ZpZpLattice load_lattice(Context& C, const std::string& matrix, const std::string& model, int k) {
  if (!matrix.empty()) {
    json jm = read_json_file(matrix);
    jm["k"] = k;
    return lattice_from_json(jm, k);
  }
  if (!model.empty()) {
    auto [a, b, c] = parse_triple(model);
    auto M = make_lattice(C.cfg.p, k, model_matrix(C.cfg.p, a, b, c));
    if (M.rank() == 0) return M;
    Rng rng(C.cfg.seed);
    return conjugate(M, random_unimodular(M.ring(), M.rank(), rng));
  }
  throw InputError("give --matrix FILE or --model a,b,c");
}

json cmd_lattice_decompose(Context& C, const std::string& matrix, const std::string& model) {
  if (!matrix.empty() && !model.empty()) throw InputError("--matrix and --model are exclusive");
  u64 p = matrix.empty() ? C.cfg.p : read_json_file(matrix).at("p").get<u64>();
  return with_precision_retry(p, C.cfg.precision, [&](int k) {
    ZpZpLattice V = load_lattice(C, matrix, model, k);
    auto d = heller_reiner(V);
    json j{{"p", V.p}, {"k", k}, {"rank", V.rank()}, {"a", d.a}, {"b", d.b}, {"c", d.c}};
    json coh = json::array();
    for (int i = 0; i <= 4; ++i) coh.push_back(group_cohomology(V, i).str());
    j["cohomology"] = coh;
    return j;
  });
}

json cmd_lattice_e2(Context& C, const std::string& pi0, const std::string& pi1, int smax) {
  if (pi0.empty() && pi1.empty()) throw InputError("give --pi0 and/or --pi1");
  u64 p = read_json_file(pi0.empty() ? pi1 : pi0).at("p").get<u64>();
  return with_precision_retry(p, C.cfg.precision, [&](int k) {
    std::optional<ZpZpLattice> a, b;
    if (!pi0.empty()) {
      json jm = read_json_file(pi0);
      jm["k"] = k;
      a = lattice_from_json(jm, k);
    }
    if (!pi1.empty()) {
      json jm = read_json_file(pi1);
      jm["k"] = k;
      b = lattice_from_json(jm, k);
    }
    auto E = e2_page(a, b, smax);
    json j{{"p", E.p}, {"k", k}, {"smax", smax}};
    json cells = json::array();
    for (auto& row : E.cells) cells.push_back(json::array({row[0].str(), row[1].str()}));
    json tags = json::array();
    for (auto& t : E.tags) tags.push_back(json{{"kind", t.kind}, {"s", t.s}, {"t", t.t}, {"count", t.count}});
    j["cells"] = cells;
    j["tags"] = tags;
    j["periodic"] = E.periodic;
    j["tags_match"] = E.tags_match;
    j["generated_low"] = E.generated_low;
    return j;
  });
}

json cmd_carlsson(const std::string& f, const std::string& search) {
  json j;
  if (!f.empty()) {
    auto r = carlsson_check(parse_poly(f));
    j["f"] = parse_poly(f).str();
    j["sq1_zero"] = r.sq1_zero;
    j["sq3"] = r.sq3.str();
    j["sq3_divisible"] = r.sq3_divisible;
  }
  if (!search.empty()) {
    int v, d;
    char x;
    std::istringstream in(search);
    if (!(in >> v >> x >> d) || x != ',') throw InputError("--search expects vars,degree");
    json c = json::array();
    for (auto& h : search_candidates(v, d)) c.push_back(h.str());
    j["search"] = json{{"vars", v}, {"degree", d}, {"count", c.size()}, {"candidates", c}};
  }
  if (j.is_null()) throw InputError("give --f or --search");
  return j;
}

// quick invariant battery over small groups
json cmd_selftest() {
  json checks = json::array();
  bool all = true;
  auto check = [&](const std::string& name, auto&& fn) {
    bool ok = false;
    std::string err;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      err = e.what();
    }
    json c{{"name", name}, {"ok", ok}};
    if (!err.empty()) c["error"] = err;
    checks.push_back(c);
    all = all && ok;
  };
  for (const char* name : {"S3", "D4", "Q8", "A4"})
    check(std::string("orthogonality ") + name, [&] {
      auto G = builtin_group(name);
      Atlas at(G);
      const auto& T = at.table();
      for (int a = 0; a < T.size(); ++a)
        for (int b = 0; b < T.size(); ++b)
          if (inner_product(*G, T.row(a), T.row(b)) != CycNum(mpq_class(a == b ? 1 : 0))) return false;
      return true;
    });
  for (u64 p : {2, 3})
    check("bonnafe suite S3 p=" + std::to_string(p), [&] {
      auto G = builtin_group("S3");
      Atlas at(G);
      const ZqRing& R = default_ring(*G, p, 8);
      RepRing RR(at, R);
      auto E = RR.idempotent_suite();
      Vec s = zero_vec(R, RR.rank());
      for (size_t i = 0; i < E.size(); ++i) {
        for (int t = 0; t < RR.rank(); ++t) s[t] += E[i][t];
        for (size_t k = 0; k < E.size(); ++k) {
          Vec x = RR.mul(E[i], E[k]);
          if (i == k ? x != E[i] : !is_zero(x)) return false;
        }
        if (!RR.is_primitive(E[i])) return false;
      }
      return s == RR.unit() && E.size() == p_prime_classes(*G, p).size();
    });
  check("kuhn S3 p=3", [] {
    auto G = builtin_group("S3");
    Atlas at(G);
    RepRing RR(at, default_ring(*G, 3, 8));
    auto K = kuhn_ideal(RR);
    return K.ideal_rank == 1 && K.quotient_rank == 2 && K.lattices_equal;
  });
  check("charring S3 p=2", [] {
    auto G = builtin_group("S3");
    Atlas at(G);
    CharRing CR(at, default_ring(*G, 2, 8));
    auto S = compute_spectrum(CR);
    return CR.rank() == static_cast<int>(commuting_pair_classes(*G, 2).size()) && evaluation_rank(CR) == CR.rank() &&
           S.partitions_agree;
  });
  check("koszul Z/4", [] {
    FinAbGroup A(std::vector<int>{4});
    return class_order(standard_cocycle(A)) == 4 && coboundary_witness(diagonal_restricted_cocycle(A)).has_value();
  });
  check("pperm S3 p=2", [] {
    auto G = builtin_group("S3");
    Atlas at(G);
    auto End = end_algebra(at, all_cosets(G), default_ring(*G, 2, 8));
    auto D = decompose_object(at, End, 1);
    bool bij = true;
    for (auto& c : D.components) bij = bij && c.labels_bijective;
    return bij && D.total_classes() == D.classical_total();
  });
  check("lattice p=3", [] {
    auto M = make_lattice(3, 8, model_matrix(3, 1, 2, 1));
    Rng rng(5);
    auto d = heller_reiner(conjugate(M, random_unimodular(M.ring(), M.rank(), rng)));
    return d.a == 1 && d.b == 2 && d.c == 1;
  });
  check("carlsson", [] {
    auto r = carlsson_check(parse_poly("x^4+(x+y+z)*x*y*z"));
    return r.sq1_zero && !r.sq3_divisible;
  });
  return json{{"checks", checks}, {"ok", all}};
}

// ---------------------------------------------------------------- output

std::string render(const json& j, const std::string& format) {
  if (format == "json") return j.dump(2) + "\n";
  std::string s;
  json flat = j.flatten();
  for (auto& [k, v] : flat.items()) s += k + "\t" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  return s;
}

std::string fixture_name(const std::vector<std::string>& args) {
  std::string s;
  for (auto& a : args) {
    if (!s.empty()) s += "_";
    for (char c : a) s += std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ? c : '_';
  }
  return s.empty() ? "noargs" : s;
}

int error_exit(const std::string& msg, int code) {
  std::cout << json{{"error", msg}, {"exit_code", code}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kq: exact K-theoretic modular representation computations"};
  app.require_subcommand(1);
  app.fallthrough();
  Context C;
  RunConfig& cfg = C.cfg;
  app.add_option("--group", cfg.group, "builtin group name or group JSON file");
  app.add_option("--p", cfg.p, "the prime p");
  app.add_option("--q-exp", cfg.q_exp, "f with q = p^f, or auto");
  app.add_option("--precision", cfg.precision, "working precision k (Z_q / p^k)");
  app.add_option("--seed", cfg.seed, "seed for every randomized step");
  app.add_option("--format", cfg.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
  app.add_option("--jobs", cfg.jobs, "worker count (results do not depend on it)");
  app.add_option("--out", cfg.out, "write the document to FILE");

  std::string cls, gset = "all-cosets", support, matrix, model, pi0, pi1, poly, search;
  bool spectrum = false, diagonal = false;
  int smax = 8;
  std::function<json()> run;

  auto* s_chartable = app.add_subcommand("chartable", "character table");
  s_chartable->callback([&] { run = [&] { return cmd_chartable(C); }; });
  auto* s_blocks = app.add_subcommand("blocks", "blocks of Z_q[G] and idempotents of R(G) x Z_q");
  s_blocks->callback([&] { run = [&] { return cmd_blocks(C); }; });
  auto* s_bonnafe = app.add_subcommand("bonnafe", "idempotent attached to a p'-class");
  s_bonnafe->add_option("--class", cls, "class: index, label like 2a, or t<order>")->required();
  s_bonnafe->callback([&] { run = [&] { return cmd_bonnafe(C, cls); }; });
  auto* s_kuhn = app.add_subcommand("kuhn", "Kuhn ideal and quotient");
  s_kuhn->callback([&] { run = [&] { return cmd_kuhn(C); }; });
  auto* s_kq0 = app.add_subcommand("kq0", "K_q^0 of the Borel construction of a G-set");
  s_kq0->add_option("--gset", gset, "point, regular, all-cosets, cosets:g1,g2 or G-set JSON file");
  s_kq0->callback([&] { run = [&] { return cmd_kq0(C, gset); }; });
  auto* s_charring = app.add_subcommand("charring", "character ring of K_q[G]");
  s_charring->add_flag("--spectrum", spectrum, "minimal and maximal primes");
  s_charring->add_option("--support", support, "G-set whose support is listed");
  s_charring->callback([&] { run = [&] { return cmd_charring(C, spectrum, support); }; });
  auto* s_spec = app.add_subcommand("specialize", "Brauer specialization of enriched classes");
  s_spec->callback([&] { run = [&] { return cmd_specialize(C); }; });
  auto* s_support = app.add_subcommand("support", "support of a permutation module");
  s_support->add_option("--gset", gset, "G-set");
  s_support->callback([&] { run = [&] { return cmd_support(C, gset); }; });
  auto* s_koszul = app.add_subcommand("koszul", "cocycle on G x G^dual");
  s_koszul->add_flag("--check-diagonal", diagonal, "search a coboundary witness on the diagonal");
  s_koszul->callback([&] { run = [&] { return cmd_koszul(C, diagonal); }; });

  auto* s_pperm = app.add_subcommand("pperm", "p-permutation objects");
  s_pperm->require_subcommand(1);
  s_pperm->fallthrough();
  auto* s_pdec = s_pperm->add_subcommand("decompose", "labeled decomposition of an object");
  s_pdec->add_option("--gset", gset, "G-set");
  s_pdec->add_option("--class", cls, "restrict to one p'-class");
  s_pdec->fallthrough();
  s_pdec->callback([&] { run = [&] { return cmd_pperm_decompose(C, gset, cls); }; });
  auto* s_pcls = s_pperm->add_subcommand("classify", "classical pairs (c, M) over p'-classes");
  s_pcls->fallthrough();
  s_pcls->callback([&] { run = [&] { return cmd_pperm_classify(C); }; });

  auto* s_lat = app.add_subcommand("lattice", "Z_p[Z/p]-lattices");
  s_lat->require_subcommand(1);
  s_lat->fallthrough();
  auto* s_ldec = s_lat->add_subcommand("decompose", "V1/V2/V3 multiplicities");
  s_ldec->add_option("--matrix", matrix, "lattice JSON file");
  s_ldec->add_option("--model", model, "a,b,c: conjugated model lattice");
  s_ldec->fallthrough();
  s_ldec->callback([&] { run = [&] { return cmd_lattice_decompose(C, matrix, model); }; });
  auto* s_le2 = s_lat->add_subcommand("e2", "E2 page of the homotopy fixed point spectral sequence");
  s_le2->add_option("--pi0", pi0, "lattice JSON for pi_0");
  s_le2->add_option("--pi1", pi1, "lattice JSON for pi_1");
  s_le2->add_option("--smax", smax, "largest s");
  s_le2->fallthrough();
  s_le2->callback([&] { run = [&] { return cmd_lattice_e2(C, pi0, pi1, smax); }; });

  auto* s_carlsson = app.add_subcommand("carlsson", "Sq^1 and Sq^3 test on a polynomial");
  s_carlsson->add_option("--f", poly, "polynomial in x, y, z over F_2");
  s_carlsson->add_option("--search", search, "vars,degree: list all candidates");
  s_carlsson->callback([&] { run = [&] { return cmd_carlsson(poly, search); }; });
  auto* s_self = app.add_subcommand("selftest", "invariant battery");
  s_self->callback([&] { run = [&] { return cmd_selftest(); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit(e.what(), 2);
  }

  json doc;
  try {
    bool needs_group = !(s_carlsson->parsed() || s_self->parsed() || s_lat->parsed());
    if (needs_group) C.load();
    if (s_blocks->parsed() || s_bonnafe->parsed() || s_kuhn->parsed()) (void)C.ring(1);
    doc = run();
  } catch (const InputError& e) {
    return error_exit(e.what(), 2);
  } catch (const NotAbelian& e) {
    return error_exit(e.what(), 2);
  } catch (const NotPGroup& e) {
    return error_exit(e.what(), 2);
  } catch (const DivisibilityError& e) {
    return error_exit(e.what(), 2);
  } catch (const PrecisionExhausted& e) {
    return error_exit(e.what(), 3);
  } catch (const std::exception& e) {
    return error_exit(e.what(), 4);
  }

  std::string text = render(doc, cfg.format);
  if (const char* fx = std::getenv("KQ_FIXTURES")) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
      if (std::string(argv[i]) != "--out") args.push_back(argv[i]);
      else ++i;
    auto path = std::filesystem::path(fx) / (fixture_name(args) + (cfg.format == "json" ? ".json" : ".tsv"));
    if (std::filesystem::exists(path)) {
      std::ifstream in(path, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      if (ss.str() != text) return error_exit("output differs from fixture " + path.string(), 4);
    } else {
      std::filesystem::create_directories(fx);
      std::ofstream(path, std::ios::binary) << text;
    }
  }
  if (!cfg.out.empty()) {
    std::ofstream o(cfg.out, std::ios::binary);
    if (!o) return error_exit("cannot write " + cfg.out, 2);
    o << text;
  } else {
    std::cout << text;
  }
  if (s_self->parsed() && !doc["ok"].get<bool>()) return 4;
  return 0;
}
