// Decomposes the sum of all coset spaces in the convolution category and
// prints each summand with its p'-class and classical label.
#include <iostream>

#include "kq/convcat.hpp"

int main(int argc, char** argv) {
  using namespace kq;
  std::string name = argc > 1 ? argv[1] : "S3";
  u64 p = argc > 2 ? std::stoull(argv[2]) : 2;
  auto G = builtin_group(name);
  Atlas at(G);
  auto End = end_algebra(at, all_cosets(G), default_ring(*G, p, 8));
  auto D = decompose_object(at, End, 1);
  for (auto& c : D.components) {
    std::cout << class_label(*G, c.cls) << ": " << c.num_classes << " classes\n";
    for (auto& s : c.summands) std::cout << "  label " << s.label << " rank " << s.rank << "\n";
  }
  std::cout << "total " << D.total_classes() << "\n";
}
