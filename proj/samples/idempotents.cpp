// Prints the idempotents of R(G) x Z_q for a builtin group, one per p'-class.
#include <iostream>

#include "kq/repring.hpp"

int main(int argc, char** argv) {
  using namespace kq;
  std::string name = argc > 1 ? argv[1] : "S4";
  u64 p = argc > 2 ? std::stoull(argv[2]) : 2;
  Atlas at(builtin_group(name));
  const ZqRing& R = default_ring(at.group(), p, 8);
  RepRing RR(at, R);
  const auto& T = at.table();
  for (int cls : p_prime_classes(at.group(), p)) {
    Vec e = RR.bonnafe_idempotent(cls);
    std::cout << class_label(at.group(), cls) << ":";
    for (int L = 0; L < T.size(); ++L) std::cout << " " << e[L].c[0];
    std::cout << "\n";
  }
  auto K = kuhn_ideal(RR);
  std::cout << "Kuhn quotient rank " << K.quotient_rank << " of " << RR.rank() << "\n";
}
