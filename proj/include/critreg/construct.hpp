#pragma once
#include <vector>

#include "critreg/covering.hpp"
#include "critreg/modulus.hpp"
#include "critreg/nodes.hpp"
#include "critreg/pingpong.hpp"

namespace crg {

// Constants of the bump construction for a regularity (k, mu).
struct BumpParams {
  int k = 1;
  Modulus mu = Modulus::lipschitz();
  double eps0 = 1e-3;
  double C = 0.0;        // 1/(1+8 eps0)
  double D = 0.0;        // (1-C)/2
  double delta0 = 0.0;   // (1-eps0) C
  double ell0star = 0.0; // largest ell <= eps0 with mu(ell) <= eps0
  double K0 = 0.0;       // C (2/D)^{k+1} |Psi|_{k,inf}

  static BumpParams make(int k, const Modulus& mu, double eps0 = 1e-3);
  json to_json() const;
};

MapObject build_bump_psi();
// g on (lo, lo+ell) with plateau value C ell^k mu(ell); ell in (0, ell0star]
MapObject build_plateau_bump(double ell, const BumpParams& p, double lo = 0.0);

struct FastDiffeo {
  MapObject map;
  Interval J;
  double height = 0.0;  // plateau displacement C ell^k mu(ell)
  bool coarse = false;  // |J| > ell0star, only the diffeomorphism condition was checked
};
// Id + g on J. With allow_coarse, intervals longer than ell0star are accepted as long as
// sup g' < 1.
FastDiffeo build_fast_diffeo(Interval J, const BumpParams& p, bool allow_coarse = false);
// smallest N with sup_J |f^N - Id| >= delta0 |J| guaranteed by the construction
long designed_exponent(double ell, const BumpParams& p);

struct InfiniteProduct {
  MapObject map;
  std::vector<FastDiffeo> factors;
  std::size_t truncation = 0;  // number of factors kept
  double tail_bound = 0.0;     // K0 sup_{i > truncation} mu(ell_i) over the supplied list
  bool certified = false;      // tail_bound < tail_tol reached before the end of the list
};
// N may be empty; otherwise N_i ell_i^{k-1} mu(ell_i) >= 1 is required.
InfiniteProduct build_infinite_product(const std::vector<Interval>& J, const std::vector<long>& N,
                                       const BumpParams& p, double tail_tol, bool allow_coarse = true);

struct LadderConfig {
  int k = 2;
  Modulus mu = Modulus::power(0.5);
  long kstar = 10;
  double eps0 = 1e-3;
  std::size_t horizon = 60;
  std::vector<double> ell;  // ell[i], i = 1..horizon+1; ell[0] unused
  std::vector<long> N;      // N[i], i = 1..horizon+1
  double kappa = 0.0;
  Interval I0{-1.0, 1.0}, Bp{0.5, 1.5}, Cp{1.25, 2.0}, Dp{1.75, 3.0};
  std::vector<Interval> L;  // L[i] = L_i^+, i = 1..horizon+1; L[0] unused

  Interval Lplus(std::size_t i) const { return L.at(i); }
  Interval Lminus(std::size_t i) const { return {-L.at(i).hi, -L.at(i).lo}; }
  // points at or beyond inf L_{horizon+1}^+ are outside the built prefix
  Interval horizon_interval() const;
  json to_json() const;
};
double ladder_ell(long i, long kstar);
LadderConfig build_ladder(int k, const Modulus& mu, long kstar, std::size_t horizon, double eps0 = 1e-3);

struct Phi {
  LadderConfig config;
  BumpParams params;
  Modulus height_modulus;           // modulus used for the rung heights
  PingPong rho0;                    // block on I0
  std::vector<FastDiffeo> rungs;    // rungs[i] on L_i^+, i >= 1
  MapObject rho2_a, rho2_b;
  Representation rep;
  Cover cover;
  Word u_dagger;
  double x1 = 0.0;                  // base point of the ping-pong block
  json to_json() const;
};
// phi = rho0 rho1 rho2 on the ladder. With height_modulus set, the rung heights use it
// instead of mu (the same geometry carrying a map of another regularity).
Phi build_phi(const LadderConfig& config, const BumpParams& params, const Modulus* height_modulus = nullptr);

// Pieces of rho1 on the positive side
PLMap chart_conjugate(const PLMap& f);  // h f h^-1 with h: 0,1/2,3/4,1 -> 5/4,7/4,2,3
MapObject rho1_b_plus(const Interval& B);

}  // namespace crg
