#pragma once
#include <vector>

#include "critreg/representation.hpp"

namespace crg {

// Thompson's F acting by PL maps of [0,1], and the chain pair f1 = x1^-1 x0, f2 = x1.
struct ThompsonPL {
  PLMap x0, x1, f1, f2;
  bool relators_hold = false;  // [x0 x1^-1, x0^-1 x1 x0] = [x0 x1^-1, x0^-2 x1 x0^2] = Id, words read as right actions
};
ThompsonPL build_thompson_pl();

// rho'(v) = rho(v) h_1^{alpha_1(v)} ... h_m^{alpha_m(v)}, alpha = first m coordinates of the
// abelianization (a, b, c, d), h_i a bump on gaps[i]
Representation rank_trick(const Representation& rho, const std::vector<Interval>& gaps, std::size_t m);

struct ChainTrick {
  PLMap a0, a1, f1, g1;
  Dyadic s1, s2, s3, s4, t0;
  std::vector<PLMap> u;       // u_0 = a1, u_1 = a1 g1
  std::vector<PLMap> ustar;   // u*_0, u*_1, u*_2
  std::vector<Interval> hulls;
  bool chain = false;
};
// toy G generated by one PL map g of [0,1]; g is squeezed into (t0, f1(t0))
ChainTrick chain_group_trick(const PLMap& g);

struct OrbitCoverage {
  std::size_t windows_hit = 0;
  std::size_t windows = 0;
  std::size_t steps = 0;
  bool complete = false;
};
// breadth-first orbit of x under the maps and their inverses, counting dyadic windows of
// width 2^-depth in (0,1)
OrbitCoverage orbit_windows(const std::vector<PLMap>& gens, const Dyadic& x, int depth, std::size_t budget);

// psi^2 o g o phi^2 for a homeomorphism g of [0,1] fixing the endpoints
MapObject compactify(const MapObject& g);

}  // namespace crg
