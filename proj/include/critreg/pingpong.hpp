#pragma once
#include <vector>

#include "critreg/representation.hpp"

namespace crg {

// Representation of (G x <s>) * <t> with G = <a,e> = BS(1,2), s = c, t = d, b trivial,
// making a given element act nontrivially. Raw layout: block i on [2i-1, 2i],
// x_{2i-1} = 2i - 1/2, z_i = 2i - 1/4; the result is rescaled affinely onto `target`.
struct PingPong {
  Representation rep;
  Word element;     // conjugate of g in alternating form t^p A ... t^p A
  Word conjugator;  // element = conjugator^-1 g conjugator
  std::vector<double> x;  // x[0] = x_1, ..., x[2l] = x_{2l+1}
  std::vector<double> z;  // z[0] = z_1, ..., z[l] = z_{l+1}
  Interval support;
  std::size_t blocks = 0;
};
// target with lo >= hi keeps the raw coordinates
PingPong build_pingpong(const Word& g, Interval target = {0.0, 0.0});

}  // namespace crg
