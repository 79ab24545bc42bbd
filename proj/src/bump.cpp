#include "critreg/bump.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

namespace crg::bump {

namespace {

double raw(double u, double p) {
  if (u <= -1.0 || u >= 1.0) return 0.0;
  return std::exp(p * (1.0 - 1.0 / (1.0 - u * u)));
}

constexpr int kPanels = 4096;

Jet psi_jet_p(const Jet& u, double p) {
  if (u.c[0] <= -1.0 || u.c[0] >= 1.0) return Jet::constant(0.0, u.n);
  Jet one_minus = 1.0 - u * u;
  Jet e = p * (1.0 - 1.0 / one_minus);
  return exp(e);
}

struct Tables {
  double p = 0.0;
  std::vector<double> cum;  // S at panel nodes
  std::array<double, kMaxJet + 1> norms{};
};

const Tables& tables() {
  static const Tables t = [] {
    Tables r;
    double lo = 1.0, hi = 3.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      double mid = 0.5 * (lo + hi);
      if (integrate_psi(mid) > 1.0) lo = mid;
      else hi = mid;
    }
    r.p = 0.5 * (lo + hi);
    r.cum.resize(kPanels + 1);
    r.cum[0] = 0.0;
    double h = 2.0 / kPanels;
    for (int i = 0; i < kPanels; ++i) {
      double a = -1.0 + i * h;
      double v = boost::math::quadrature::gauss<double, 15>::integrate([&](double u) { return raw(u, r.p); }, a, a + h);
      r.cum[i + 1] = r.cum[i] + v;
    }
    // derivative sup norms on a fine grid
    for (int i = 1; i < 20000; ++i) {
      double u = -1.0 + 2.0 * i / 20000.0;
      Jet j = psi_jet_p(Jet::variable(u, kMaxJet), r.p);
      for (int d = 0; d <= kMaxJet; ++d) r.norms[d] = std::max(r.norms[d], std::fabs(j.derivative(d)));
    }
    return r;
  }();
  return t;
}

}  // namespace

double integrate_psi(double p) {
  auto f = [p](double u) { return raw(u, p); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 15, 1e-15);
}

double psi_power() { return tables().p; }

double psi(double u) { return raw(u, psi_power()); }

Jet psi_jet(const Jet& u) { return psi_jet_p(u, tables().p); }

double S(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const Tables& t = tables();
  double h = 2.0 / kPanels;
  int i = static_cast<int>((u + 1.0) / h);
  if (i >= kPanels) i = kPanels - 1;
  double a = -1.0 + i * h;
  double p = t.p;
  double v = boost::math::quadrature::gauss<double, 10>::integrate([p](double x) { return raw(x, p); }, a, u);
  return t.cum[i] + v;
}

Jet S_jet(const Jet& u) {
  Jet r = Jet::constant(S(u.c[0]), u.n);
  if (u.n == 0) return r;
  // Taylor coefficients of Psi at u0, integrated termwise
  Jet pj = psi_jet(Jet::variable(u.c[0], u.n - 1));
  std::array<double, kMaxJet + 1> outer{};
  outer[0] = r.c[0];
  for (int j = 0; j < u.n; ++j) outer[j + 1] = pj.c[j] / (j + 1);
  return compose_series(outer, u);
}

double psi_norm(int k) {
  const Tables& t = tables();
  double m = 0.0;
  for (int j = 0; j <= k && j <= kMaxJet; ++j) m = std::max(m, t.norms[j]);
  return m;
}

}  // namespace crg::bump
