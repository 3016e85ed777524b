// Hides V1^a + V2^b + V3^c behind a random change of basis and recovers (a, b, c).
#include <iostream>

#include "kq/lattices.hpp"

int main(int argc, char** argv) {
  using namespace kq;
  u64 p = argc > 1 ? std::stoull(argv[1]) : 3;
  int a = argc > 2 ? std::stoi(argv[2]) : 2, b = argc > 3 ? std::stoi(argv[3]) : 1, c = argc > 4 ? std::stoi(argv[4]) : 3;
  auto M = make_lattice(p, 8, model_matrix(p, a, b, c));
  Rng rng(42);
  auto V = conjugate(M, random_unimodular(M.ring(), M.rank(), rng));
  for (int i = 0; i <= 4; ++i) std::cout << "H^" << i << " = " << group_cohomology(V, i).str() << "\n";
  auto d = heller_reiner(V);
  std::cout << "(a, b, c) = (" << d.a << ", " << d.b << ", " << d.c << ")\n";
}
