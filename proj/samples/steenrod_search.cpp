// Lists the degree-d polynomials in v variables killed by Sq^1 that do not divide their Sq^3.
#include <iostream>

#include "kq/steenrod.hpp"

int main(int argc, char** argv) {
  using namespace kq;
  int v = argc > 1 ? std::stoi(argv[1]) : 3, d = argc > 2 ? std::stoi(argv[2]) : 4;
  auto found = search_candidates(v, d);
  for (auto& f : found) std::cout << f.str() << "\n";
  std::cout << found.size() << " candidates\n";
}
