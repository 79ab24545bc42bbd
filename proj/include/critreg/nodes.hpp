#pragma once
#include <vector>

#include "critreg/homeo.hpp"

// Smooth node families: the normalized bump, bump diffeomorphisms, polynomial
// maps of a compact interval and the flat-chart conjugation of [0,1].
namespace crg {

// Psi as a function node (not a homeomorphism).
MapObject psi_function();
// x + h Psi((2x - lo - hi)/(hi - lo)); requires 2 h max|Psi'| < hi - lo
MapObject psi_bump_diffeo(double lo, double hi, double h);
// Plateau function g on (lo, lo+ell): H S(2t/(D ell) - 1) on the left half, mirrored on
// the right half, t = x - lo.
MapObject plateau_function(double lo, double ell, double H, double D);
// Id + plateau_function; requires sup g' < 1
MapObject plateau_diffeo(double lo, double ell, double H, double D);
// Polynomial sum c_j x^j restricted to [lo, hi]; must be increasing there.
MapObject polynomial_map(std::vector<double> coeffs, double lo, double hi);

// Chart phi(x) of [0,1], equal to exp(-1/x) near 0 and 1 - exp(-1/(1-x)) near 1.
double flat_chart(double x);
double flat_chart_inverse(double y);
// psi^2 o g o phi^2 for a homeo g of [0,1]
MapObject compactify_map(const MapObject& g);

}  // namespace crg
