#pragma once
#include "critreg/jet.hpp"

// The normalized bump Psi(t) = exp(p (1 - 1/(1-t^2))) on (-1,1), with the power p
// chosen so that the integral is 1, and its primitive S(u) = int_{-1}^u Psi.
namespace crg::bump {

double psi_power();
double psi(double u);
Jet psi_jet(const Jet& u);
double S(double u);
Jet S_jet(const Jet& u);
// max over j <= k of sup |Psi^(j)|
double psi_norm(int k);
double integrate_psi(double p);

}  // namespace crg::bump
