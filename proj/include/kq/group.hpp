#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kq/error.hpp"
#include "kq/numeric.hpp"

namespace kq {

struct ConjugacyClass {
  int representative = 0;  // minimal member
  std::vector<int> members;
  int element_order = 1;
  int size() const { return static_cast<int>(members.size()); }
};

/**
 * A finite group stored as its full multiplication table on 0..n-1.
 *
 * Element 0 is the identity.  The constructor validates the table and
 * computes inverses, element orders and conjugacy classes, which every
 * downstream module uses.
 */
class FiniteGroup {
 public:
  FiniteGroup(std::string name, std::vector<std::vector<int>> table) : name_(std::move(name)) {
    n_ = static_cast<int>(table.size());
    if (n_ == 0) throw InputError("empty multiplication table");
    mult_.assign(static_cast<size_t>(n_) * n_, 0);
    for (int a = 0; a < n_; ++a) {
      if (static_cast<int>(table[a].size()) != n_) throw InputError("multiplication table is not square");
      std::vector<char> seen(n_, 0);
      for (int b = 0; b < n_; ++b) {
        int c = table[a][b];
        if (c < 0 || c >= n_ || seen[c]) throw InputError("multiplication table row is not a permutation");
        seen[c] = 1;
        mult_[a * n_ + b] = c;
      }
    }
    for (int a = 0; a < n_; ++a)
      if (mul(0, a) != a || mul(a, 0) != a) throw InputError("element 0 is not the identity");
    for (int b = 0; b < n_; ++b) {
      std::vector<char> seen(n_, 0);
      for (int a = 0; a < n_; ++a) {
        if (seen[mul(a, b)]) throw InputError("multiplication table column is not a permutation");
        seen[mul(a, b)] = 1;
      }
    }
    check_associative();
    inv_.assign(n_, -1);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (mul(a, b) == 0) inv_[a] = b;
    order_of_.assign(n_, 1);
    for (int a = 0; a < n_; ++a) {
      int x = a, o = 1;
      while (x != 0) {
        x = mul(x, a);
        ++o;
      }
      order_of_[a] = o;
    }
    build_classes();
  }

  const std::string& name() const { return name_; }
  int order() const { return n_; }
  int mul(int a, int b) const { return mult_[a * n_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int element_order(int a) const { return order_of_[a]; }
  /// x g x^{-1}
  int conj(int x, int g) const { return mul(mul(x, g), inv_[x]); }
  int pow(int g, i64 e) const {
    int o = order_of_[g];
    e %= o;
    if (e < 0) e += o;
    int r = 0;
    for (i64 i = 0; i < e; ++i) r = mul(r, g);
    return r;
  }
  bool commute(int a, int b) const { return mul(a, b) == mul(b, a); }
  int exponent() const {
    i64 e = 1;
    for (int o : order_of_) e = std::lcm(e, static_cast<i64>(o));
    return static_cast<int>(e);
  }
  bool is_abelian() const {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < a; ++b)
        if (!commute(a, b)) return false;
    return true;
  }

  const std::vector<ConjugacyClass>& classes() const { return classes_; }
  int num_classes() const { return static_cast<int>(classes_.size()); }
  int class_of(int g) const { return class_of_[g]; }
  /// class of g^e as a power map on class indices
  int power_class(int c, i64 e) const { return class_of_[pow(classes_[c].representative, e)]; }

  std::vector<std::vector<int>> table() const {
    std::vector<std::vector<int>> t(n_, std::vector<int>(n_));
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) t[a][b] = mul(a, b);
    return t;
  }

 private:
  void check_associative() const {
    auto triple = [&](int a, int b, int c) {
      if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw InputError("multiplication table is not associative");
    };
    if (n_ <= 64) {
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
          for (int c = 0; c < n_; ++c) triple(a, b, c);
    } else {
      Rng rng(0x5eed);
      for (int i = 0; i < 40000; ++i)
        triple(static_cast<int>(rng.below(n_)), static_cast<int>(rng.below(n_)), static_cast<int>(rng.below(n_)));
    }
  }

  void build_classes() {
    class_of_.assign(n_, -1);
    for (int g = 0; g < n_; ++g) {
      if (class_of_[g] >= 0) continue;
      ConjugacyClass cc;
      std::vector<char> in(n_, 0);
      for (int x = 0; x < n_; ++x) {
        int h = conj(x, g);
        if (!in[h]) {
          in[h] = 1;
          cc.members.push_back(h);
        }
      }
      std::sort(cc.members.begin(), cc.members.end());
      cc.representative = cc.members.front();
      cc.element_order = order_of_[g];
      int idx = static_cast<int>(classes_.size());
      for (int h : cc.members) class_of_[h] = idx;
      classes_.push_back(std::move(cc));
    }
  }

  std::string name_;
  int n_ = 0;
  std::vector<int> mult_, inv_, order_of_, class_of_;
  std::vector<ConjugacyClass> classes_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// ---------------------------------------------------------------- subgroups

struct Subgroup {
  std::vector<int> members;  // sorted, contains 0
  int order() const { return static_cast<int>(members.size()); }
  bool contains(int g) const { return std::binary_search(members.begin(), members.end(), g); }
  bool operator==(const Subgroup& o) const { return members == o.members; }
  bool operator<(const Subgroup& o) const {
    if (members.size() != o.members.size()) return members.size() < o.members.size();
    return members < o.members;
  }
};

inline Subgroup closure(const FiniteGroup& G, const std::vector<int>& gens) {
  std::vector<char> in(G.order(), 0);
  std::vector<int> elems{0};
  in[0] = 1;
  for (size_t i = 0; i < elems.size(); ++i)
    for (int s : gens) {
      int h = G.mul(elems[i], s);
      if (!in[h]) {
        in[h] = 1;
        elems.push_back(h);
      }
    }
  std::sort(elems.begin(), elems.end());
  return {elems};
}

inline Subgroup whole_group(const FiniteGroup& G) {
  Subgroup s;
  for (int g = 0; g < G.order(); ++g) s.members.push_back(g);
  return s;
}

inline Subgroup centralizer(const FiniteGroup& G, int g) {
  Subgroup s;
  for (int x = 0; x < G.order(); ++x)
    if (G.commute(x, g)) s.members.push_back(x);
  return s;
}

inline Subgroup conjugate(const FiniteGroup& G, const Subgroup& H, int x) {
  Subgroup s;
  for (int h : H.members) s.members.push_back(G.conj(x, h));
  std::sort(s.members.begin(), s.members.end());
  return s;
}

inline Subgroup normalizer(const FiniteGroup& G, const Subgroup& H) {
  Subgroup s;
  for (int x = 0; x < G.order(); ++x)
    if (conjugate(G, H, x) == H) s.members.push_back(x);
  return s;
}

inline Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  Subgroup s;
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                        std::back_inserter(s.members));
  return s;
}

inline bool is_p_power(u64 n, u64 p) { return split_part(n, p).second == 1; }

/// Unique factorization g = g_p g_p' into commuting p- and p'-parts.
inline std::pair<int, int> p_decomposition(const FiniteGroup& G, int g, u64 p) {
  auto [pa, m] = split_part(static_cast<u64>(G.element_order(g)), p);
  // a = 1 mod pa, a = 0 mod m gives the p-part g^a
  u64 o = pa * m;
  u64 a = 0;
  for (u64 t = 0; t < o; t += m)
    if (t % pa == 1 % pa) {
      a = t;
      break;
    }
  int gp = G.pow(g, static_cast<i64>(a));
  int gq = G.mul(g, G.inv(gp));
  return {gp, gq};
}

/// Sylow p-subgroup by greedy growth through p-element joins in index order.
inline Subgroup sylow_subgroup(const FiniteGroup& G, u64 p) {
  u64 target = split_part(static_cast<u64>(G.order()), p).first;
  Subgroup H{{0}};
  bool progress = true;
  while (static_cast<u64>(H.order()) < target && progress) {
    progress = false;
    for (int g = 0; g < G.order() && static_cast<u64>(H.order()) < target; ++g) {
      if (H.contains(g) || !is_p_power(G.element_order(g), p)) continue;
      auto gens = H.members;
      gens.push_back(g);
      Subgroup K = closure(G, gens);
      if (is_p_power(K.order(), p)) {
        H = K;
        progress = true;
      }
    }
  }
  return H;
}

inline std::vector<Subgroup> all_subgroups(const FiniteGroup& G) {
  std::set<Subgroup> found;
  std::vector<Subgroup> cyclic;
  for (int g = 0; g < G.order(); ++g) {
    Subgroup c = closure(G, {g});
    if (found.insert(c).second) cyclic.push_back(c);
  }
  std::vector<Subgroup> frontier(found.begin(), found.end());
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const auto& H : frontier)
      for (const auto& C : cyclic) {
        if (std::includes(H.members.begin(), H.members.end(), C.members.begin(), C.members.end())) continue;
        auto gens = H.members;
        gens.insert(gens.end(), C.members.begin(), C.members.end());
        Subgroup K = closure(G, gens);
        if (found.insert(K).second) next.push_back(K);
      }
    frontier = std::move(next);
  }
  return {found.begin(), found.end()};
}

/// One representative per conjugacy class of subgroups, lex-least member list,
/// ordered by (order, members).
inline std::vector<Subgroup> subgroup_class_reps(const FiniteGroup& G) {
  std::vector<Subgroup> reps;
  std::set<Subgroup> seen;
  for (const auto& H : all_subgroups(G)) {
    if (seen.count(H)) continue;
    Subgroup best = H;
    for (int x = 0; x < G.order(); ++x) {
      Subgroup K = conjugate(G, H, x);
      seen.insert(K);
      if (K.members < best.members) best = K;
    }
    reps.push_back(best);
  }
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  return reps;
}

inline bool are_conjugate(const FiniteGroup& G, const Subgroup& a, const Subgroup& b) {
  if (a.order() != b.order()) return false;
  for (int x = 0; x < G.order(); ++x)
    if (conjugate(G, a, x) == b) return true;
  return false;
}

/// A subgroup re-indexed as a standalone group; element i of `group` is
/// `to_parent[i]` in the parent, and `from_parent[g]` is -1 off the subgroup.
struct EmbeddedGroup {
  GroupPtr group;
  std::vector<int> to_parent;
  std::vector<int> from_parent;
};

inline EmbeddedGroup as_group(const FiniteGroup& G, const Subgroup& H, const std::string& name = "") {
  EmbeddedGroup e;
  e.to_parent = H.members;
  e.from_parent.assign(G.order(), -1);
  for (int i = 0; i < H.order(); ++i) e.from_parent[H.members[i]] = i;
  std::vector<std::vector<int>> t(H.order(), std::vector<int>(H.order()));
  for (int i = 0; i < H.order(); ++i)
    for (int j = 0; j < H.order(); ++j) {
      int c = e.from_parent[G.mul(H.members[i], H.members[j])];
      if (c < 0) throw InputError("subset is not closed under multiplication");
      t[i][j] = c;
    }
  e.group = std::make_shared<FiniteGroup>(name.empty() ? G.name() + "_sub" + std::to_string(H.order()) : name, t);
  return e;
}

/// Quotient by a normal subgroup; cosets indexed by their minimal element order.
struct QuotientGroup {
  GroupPtr group;
  std::vector<int> coset_of;  // parent element -> quotient element
};

inline QuotientGroup quotient(const FiniteGroup& G, const Subgroup& N) {
  QuotientGroup q;
  q.coset_of.assign(G.order(), -1);
  std::vector<int> reps;
  for (int g = 0; g < G.order(); ++g) {
    if (q.coset_of[g] >= 0) continue;
    int idx = static_cast<int>(reps.size());
    reps.push_back(g);
    for (int n : N.members) q.coset_of[G.mul(g, n)] = idx;
  }
  int k = static_cast<int>(reps.size());
  std::vector<std::vector<int>> t(k, std::vector<int>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) t[a][b] = q.coset_of[G.mul(reps[a], reps[b])];
  q.group = std::make_shared<FiniteGroup>(G.name() + "_quot", t);
  return q;
}

/// Commuting pairs (u, g) with u of p-power order, up to simultaneous
/// conjugation.  u runs over the canonical class representatives and g over
/// representatives of Z_G(u)-classes inside Z_G(u) (minimal index).
struct CommutingPair {
  int u = 0;
  int g = 0;
  int u_class = 0;
};

inline std::vector<CommutingPair> commuting_pair_classes(const FiniteGroup& G, u64 p) {
  std::vector<CommutingPair> out;
  for (int c = 0; c < G.num_classes(); ++c) {
    const auto& cc = G.classes()[c];
    if (!is_p_power(cc.element_order, p)) continue;
    int u = cc.representative;
    Subgroup Z = centralizer(G, u);
    std::vector<char> done(G.order(), 0);
    for (int g : Z.members) {
      if (done[g]) continue;
      int best = g;
      for (int x : Z.members) {
        int h = G.conj(x, g);
        done[h] = 1;
        best = std::min(best, h);
      }
      out.push_back({u, best, c});
    }
  }
  std::sort(out.begin(), out.end(), [](const CommutingPair& a, const CommutingPair& b) {
    return std::pair(a.u_class, a.g) < std::pair(b.u_class, b.g);
  });
  return out;
}

/// Double cosets H x K, as sorted member lists ordered by minimal element.
inline std::vector<std::vector<int>> double_cosets(const FiniteGroup& G, const Subgroup& H, const Subgroup& K) {
  std::vector<char> done(G.order(), 0);
  std::vector<std::vector<int>> out;
  for (int x = 0; x < G.order(); ++x) {
    if (done[x]) continue;
    std::vector<int> d;
    for (int h : H.members)
      for (int k : K.members) {
        int y = G.mul(G.mul(h, x), k);
        if (!done[y]) {
          done[y] = 1;
          d.push_back(y);
        }
      }
    std::sort(d.begin(), d.end());
    out.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------- permutations

using Perm = std::vector<int>;  // 0-based images

/// Parses "(1,2,3)(4,5)" or "(1 2 3)" on points 1..degree.
inline Perm parse_cycles(const std::string& s, int degree) {
  Perm p(degree);
  for (int i = 0; i < degree; ++i) p[i] = i;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '(') {
      if (!std::isspace(static_cast<unsigned char>(s[i]))) throw InputError("bad cycle string: " + s);
      ++i;
      continue;
    }
    size_t j = s.find(')', i);
    if (j == std::string::npos) throw InputError("unbalanced cycle string: " + s);
    std::string body = s.substr(i + 1, j - i - 1);
    for (char& ch : body)
      if (ch == ',') ch = ' ';
    std::istringstream in(body);
    std::vector<int> cyc;
    int x;
    while (in >> x) {
      if (x < 1 || x > degree) throw InputError("point out of range in " + s);
      cyc.push_back(x - 1);
    }
    // compose: new perm = cycle o p (cycles applied right to left as written)
    Perm c(degree);
    for (int t = 0; t < degree; ++t) c[t] = t;
    for (size_t t = 0; t < cyc.size(); ++t) c[cyc[t]] = cyc[(t + 1) % cyc.size()];
    Perm r(degree);
    for (int t = 0; t < degree; ++t) r[t] = p[c[t]];
    p = r;
    i = j + 1;
  }
  return p;
}

/// Closes permutation generators into a group; (gh)(x) = g(h(x)).
/// Elements appear in breadth-first order, identity first.
inline FiniteGroup group_from_permutations(const std::string& name, int degree, const std::vector<Perm>& gens) {
  for (const auto& g : gens)
    if (static_cast<int>(g.size()) != degree) throw InputError("generator has wrong degree");
  Perm id(degree);
  for (int i = 0; i < degree; ++i) id[i] = i;
  std::vector<Perm> elems{id};
  std::map<Perm, int> index{{id, 0}};
  auto compose = [&](const Perm& g, const Perm& h) {
    Perm r(degree);
    for (int x = 0; x < degree; ++x) r[x] = g[h[x]];
    return r;
  };
  for (size_t i = 0; i < elems.size(); ++i)
    for (const auto& s : gens) {
      Perm h = compose(s, elems[i]);
      if (!index.count(h)) {
        if (elems.size() > 5000) throw InputError("permutation group too large");
        index[h] = static_cast<int>(elems.size());
        elems.push_back(h);
      }
    }
  int n = static_cast<int>(elems.size());
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
  return FiniteGroup(name, t);
}

inline FiniteGroup quaternion_group() {
  // elements (s, u) meaning s * u with s in {+1,-1}, u in {1,i,j,k}
  static const int unit_mul[4][4][2] = {
      {{1, 0}, {1, 1}, {1, 2}, {1, 3}},
      {{1, 1}, {-1, 0}, {1, 3}, {-1, 2}},
      {{1, 2}, {-1, 3}, {-1, 0}, {1, 1}},
      {{1, 3}, {1, 2}, {-1, 1}, {-1, 0}},
  };
  auto idx = [](int s, int u) { return u * 2 + (s < 0 ? 1 : 0); };
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int sa = (a % 2) ? -1 : 1, ua = a / 2, sb = (b % 2) ? -1 : 1, ub = b / 2;
      int s = sa * sb * unit_mul[ua][ub][0];
      t[a][b] = idx(s, unit_mul[ua][ub][1]);
    }
  return FiniteGroup("Q8", t);
}

inline std::string canonical_group_name(std::string s) {
  std::string r;
  for (char c : s)
    if (c != ' ' && c != '/') r += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return r;
}

/// Builtin zoo: trivial, Z/n (n <= 16), Z2xZ2, Z4xZ2, D4, Q8, S3, A4, S4, A5.
inline GroupPtr builtin_group(const std::string& requested) {
  std::string key = canonical_group_name(requested);
  auto perms = [](const std::string& name, int deg, std::vector<std::string> cyc) {
    std::vector<Perm> g;
    for (auto& c : cyc) g.push_back(parse_cycles(c, deg));
    return std::make_shared<FiniteGroup>(group_from_permutations(name, deg, g));
  };
  if (key == "TRIVIAL" || key == "1" || key == "Z1") return perms("trivial", 1, {});
  if (key.size() >= 2 && key[0] == 'Z' && key.find('X') == std::string::npos) {
    int n = std::stoi(key.substr(1));
    if (n < 1 || n > 16) throw InputError("cyclic builtin groups go up to Z/16");
    std::string c = "(";
    for (int i = 1; i <= n; ++i) c += std::to_string(i) + (i < n ? " " : ")");
    return perms("Z/" + std::to_string(n), n, {n > 1 ? c : ""});
  }
  if (key == "Z2XZ2" || key == "V4" || key == "K4") return perms("Z/2xZ/2", 4, {"(1 2)", "(3 4)"});
  if (key == "Z4XZ2" || key == "Z2XZ4") return perms("Z/4xZ/2", 6, {"(1 2 3 4)", "(5 6)"});
  if (key == "D4" || key == "D8") return perms("D4", 4, {"(1 2 3 4)", "(1 3)"});
  if (key == "Q8") return std::make_shared<FiniteGroup>(quaternion_group());
  if (key == "S3") return perms("S3", 3, {"(1 2 3)", "(1 2)"});
  if (key == "A4") return perms("A4", 4, {"(1 2 3)", "(1 2)(3 4)"});
  if (key == "S4") return perms("S4", 4, {"(1 2 3 4)", "(1 2)"});
  if (key == "A5") return perms("A5", 5, {"(1 2 3 4 5)", "(1 2 3)"});
  throw InputError("unknown builtin group: " + requested);
}

inline std::vector<std::string> builtin_group_names() {
  std::vector<std::string> v{"trivial"};
  for (int n = 2; n <= 16; ++n) v.push_back("Z/" + std::to_string(n));
  for (const char* s : {"Z/2xZ/2", "Z/4xZ/2", "D4", "Q8", "S3", "A4", "S4", "A5"}) v.push_back(s);
  return v;
}

/// Short class label: element order then a letter in class-index order.
inline std::string class_label(const FiniteGroup& G, int c) {
  int o = G.classes()[c].element_order;
  int k = 0;
  for (int d = 0; d < c; ++d)
    if (G.classes()[d].element_order == o) ++k;
  return std::to_string(o) + static_cast<char>('a' + k);
}

/// Accepts a bare index, "c<index>", an order label like "2a", or "t<order>"
/// for the first class whose elements have that order.
inline int parse_class(const FiniteGroup& G, const std::string& s) {
  auto all_digits = [](const std::string& t) {
    return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  int c = -1;
  if (all_digits(s)) c = std::stoi(s);
  else if (s.size() > 1 && s[0] == 'c' && all_digits(s.substr(1))) c = std::stoi(s.substr(1));
  else if (s.size() > 1 && s[0] == 't' && all_digits(s.substr(1))) {
    int o = std::stoi(s.substr(1));
    for (int d = 0; d < G.num_classes(); ++d)
      if (G.classes()[d].element_order == o) {
        c = d;
        break;
      }
  } else {
    for (int d = 0; d < G.num_classes(); ++d)
      if (class_label(G, d) == s) c = d;
  }
  if (c < 0 || c >= G.num_classes()) throw InputError("unknown conjugacy class: " + s);
  return c;
}

}  // namespace kq
