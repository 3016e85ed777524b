#pragma once
// JSON encoding of the library types (nlohmann/json).

#include <filesystem>
#include <fstream>
#include "json.hpp"

#include "kq/cyclotomic.hpp"
#include "kq/gset.hpp"
#include "kq/lattices.hpp"
#include "kq/zq.hpp"

namespace kq {

using json = nlohmann::ordered_json;

inline json mpz_json(const mpz_class& z) {
  if (z.fits_slong_p()) return json(z.get_si());
  return json(z.get_str());
}

inline mpz_class mpz_from_json(const json& j) {
  if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<i64>()));
  if (j.is_string()) return mpz_class(j.get<std::string>());
  throw InputError("expected an integer");
}

inline json to_json(const ZqElem& a) {
  const ZqRing& R = a.R();
  json h = json::array(), c = json::array();
  for (u64 x : R.h()) h.push_back(x);
  for (u64 x : a.coeffs()) c.push_back(x);
  return json{{"p", R.p()}, {"f", R.f()}, {"k", R.k()}, {"h", h}, {"coeffs", c}};
}

inline ZqElem zq_from_json(const json& j) {
  try {
    const ZqRing& R = ZqRing::get(j.at("p").get<u64>(), j.at("f").get<int>(), j.at("k").get<int>());
    if (j.contains("h") && j.at("h").get<std::vector<u64>>() != R.h())
      throw InputError("ZqElem uses a different defining polynomial");
    return R.from_coeffs(j.at("coeffs").get<std::vector<u64>>());
  } catch (const json::exception& e) {
    throw InputError(std::string("bad ZqElem: ") + e.what());
  }
}

inline json to_json(const Vec& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(to_json(x));
  return a;
}

/// {"n", "num", "den"}: coefficient i of zeta_n^i is num[i]/den[i].
inline json to_json(const CycNum& a) {
  CycNum m = minimal_form(a);
  json num = json::array(), den = json::array();
  for (auto& c : m.coeffs()) {
    num.push_back(mpz_json(c.get_num()));
    den.push_back(mpz_json(c.get_den()));
  }
  return json{{"n", m.conductor()}, {"num", num}, {"den", den}};
}

inline CycNum cyc_from_json(const json& j) {
  try {
    int n = j.at("n").get<int>();
    const auto& num = j.at("num");
    const auto& den = j.at("den");
    if (num.size() != den.size()) throw InputError("num and den differ in length");
    std::vector<mpq_class> c;
    for (size_t i = 0; i < num.size(); ++i) {
      mpz_class d = mpz_from_json(den[i]);
      if (d == 0) throw InputError("zero denominator");
      mpq_class q(mpz_from_json(num[i]), d);
      q.canonicalize();
      c.push_back(q);
    }
    return CycNum(n, c);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad CycNum: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

/// {"name","order","mult_table"} or {"name","degree","generators"}.
inline GroupPtr group_from_json(const json& j) {
  try {
    std::string name = j.value("name", std::string("G"));
    if (j.contains("mult_table")) {
      auto t = j.at("mult_table").get<std::vector<std::vector<int>>>();
      if (j.contains("order") && j.at("order").get<size_t>() != t.size()) throw InputError("order does not match table");
      return std::make_shared<FiniteGroup>(name, t);
    }
    if (j.contains("generators")) {
      int d = j.at("degree").get<int>();
      if (d < 1) throw InputError("degree must be positive");
      std::vector<Perm> gens;
      for (auto& s : j.at("generators")) gens.push_back(parse_cycles(s.get<std::string>(), d));
      return std::make_shared<FiniteGroup>(group_from_permutations(name, d, gens));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bad group JSON: ") + e.what());
  }
  throw InputError("group JSON needs mult_table or generators");
}

/// Builtin name, or a path to a group JSON file.
inline GroupPtr load_group(const std::string& src) {
  if (std::filesystem::is_regular_file(src)) return group_from_json(read_json_file(src));
  return builtin_group(src);
}

/// {"points": n, "action": {element: [images]}}; listed elements may be generators.
inline FiniteGSet gset_from_json(const GroupPtr& G, const json& j) {
  try {
    int n = j.at("points").get<int>();
    if (n < 0) throw InputError("negative point count");
    std::map<int, std::vector<int>> gens;
    for (auto& [k, v] : j.at("action").items()) {
      int g = std::stoi(k);
      if (g < 0 || g >= G->order()) throw InputError("element index out of range: " + k);
      auto im = v.get<std::vector<int>>();
      if (static_cast<int>(im.size()) != n) throw InputError("image list has wrong length");
      gens[g] = im;
    }
    return FiniteGSet::from_generators(G, n, gens);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad G-set JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw InputError("action keys must be element indices");
  }
}

/// "point", "regular", "all-cosets", "cosets:<subgroup generators>" or a JSON file.
inline FiniteGSet load_gset(const GroupPtr& G, const std::string& src) {
  if (src == "point" || src == "pt") return point_gset(G);
  if (src == "regular") return regular_gset(G);
  if (src == "all-cosets") return all_cosets(G);
  if (src.rfind("cosets:", 0) == 0) {
    std::vector<int> gens;
    std::istringstream in(src.substr(7));
    std::string tok;
    while (std::getline(in, tok, ','))
      if (!tok.empty()) {
        int g = std::stoi(tok);
        if (g < 0 || g >= G->order()) throw InputError("element index out of range: " + tok);
        gens.push_back(g);
      }
    return coset_space(G, closure(*G, gens));
  }
  if (std::filesystem::is_regular_file(src)) return gset_from_json(G, read_json_file(src));
  throw InputError("unknown G-set: " + src);
}

inline json to_json(const ZpZpLattice& V) {
  json T = json::array();
  for (int i = 0; i < V.rank(); ++i) {
    json row = json::array();
    for (int j = 0; j < V.rank(); ++j) {
      i64 v = static_cast<i64>(V.T(i, j).c[0]);
      if (v > static_cast<i64>(V.ring().modulus() / 2)) v -= static_cast<i64>(V.ring().modulus());
      row.push_back(v);
    }
    T.push_back(row);
  }
  return json{{"p", V.p}, {"k", V.k}, {"n", V.rank()}, {"T", T}};
}

inline ZpZpLattice lattice_from_json(const json& j, int default_k = 8) {
  try {
    u64 p = j.at("p").get<u64>();
    if (!is_prime(p)) throw InputError("p must be prime");
    int k = j.value("k", default_k);
    auto T = j.at("T").get<std::vector<std::vector<i64>>>();
    if (j.contains("n") && j.at("n").get<size_t>() != T.size()) throw InputError("n does not match T");
    return make_lattice(p, k, T);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad lattice JSON: ") + e.what());
  }
}

}  // namespace kq
