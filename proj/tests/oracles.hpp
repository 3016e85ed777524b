#pragma once

// Independent counts used by the tests and the acceptance runner.

#include "kq/charring.hpp"
#include "kq/convcat.hpp"

namespace kq::oracle {

// Number of indecomposable p-permutation modules of H up to isomorphism:
// sum over p-subgroups P up to conjugacy of the p'-classes of N_H(P)/P.
inline int broue_count(const FiniteGroup& H, u64 p) {
  int n = 0;
  for (auto& P : subgroup_class_reps(H)) {
    if (!is_p_power(P.order(), p)) continue;
    auto N = as_group(H, normalizer(H, P));
    Subgroup Pn;
    for (int x : P.members) Pn.members.push_back(N.from_parent[x]);
    std::sort(Pn.members.begin(), Pn.members.end());
    auto Q = quotient(*N.group, Pn);
    n += static_cast<int>(p_prime_classes(*Q.group, p).size());
  }
  return n;
}

// classical count for Z_G(c) acting on Y^c: c is central and acts trivially,
// and every subgroup of Z_G(c) containing c is a stabilizer, so the count is
// the Broue count of Z_G(c)/<c>
inline int pperm_total(const FiniteGroup& G, u64 p) {
  int total = 0;
  for (int cls : p_prime_classes(G, p)) {
    int c = G.classes()[cls].representative;
    auto Z = as_group(G, centralizer(G, c));
    auto C = closure(*Z.group, {Z.from_parent[c]});
    auto H = quotient(*Z.group, C);
    total += broue_count(*H.group, p);
  }
  return total;
}

// the same sum with the full Broue count of Z_G(c)
inline int pperm_total_unreduced(const FiniteGroup& G, u64 p) {
  int total = 0;
  for (int cls : p_prime_classes(G, p)) {
    auto Z = as_group(G, centralizer(G, G.classes()[cls].representative));
    total += broue_count(*Z.group, p);
  }
  return total;
}

// number of Z_G(u)-classes summed over p-power classes u
inline int commuting_pairs(const FiniteGroup& G, u64 p) {
  int n = 0;
  for (int c : p_power_classes(G, p)) {
    auto Z = as_group(G, centralizer(G, G.classes()[c].representative));
    n += Z.group->num_classes();
  }
  return n;
}

}  // namespace kq::oracle
