#include "critreg/construct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "critreg/bump.hpp"
#include "critreg/tricks.hpp"

namespace crg {

BumpParams BumpParams::make(int k, const Modulus& mu, double eps0) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw std::invalid_argument("eps0 must lie in (0,1)");
  BumpParams p;
  p.k = k;
  p.mu = mu;
  p.eps0 = eps0;
  p.C = 1.0 / (1.0 + 8.0 * eps0);
  p.D = (1.0 - p.C) / 2.0;
  p.delta0 = (1.0 - eps0) * p.C;
  if (p.D > 0.1 || p.delta0 < 0.9) throw std::invalid_argument("eps0 too large: need D <= 1/10, delta0 >= 9/10");
  if (mu(eps0) <= eps0) {
    p.ell0star = eps0;
  } else {
    // bisection in log scale for mu(ell) = eps0
    double lo = std::log(1e-300), hi = std::log(eps0);
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (mu(std::exp(mid)) <= eps0 ? lo : hi) = mid;
    }
    p.ell0star = std::exp(lo);
  }
  p.K0 = p.C * std::pow(2.0 / p.D, k + 1) * bump::psi_norm(k);
  return p;
}

json BumpParams::to_json() const {
  json j;
  j["k"] = k;
  j["mu"] = mu.descriptor();
  j["eps0"] = eps0;
  j["C"] = C;
  j["D"] = D;
  j["delta0"] = delta0;
  j["ell0star"] = ell0star;
  j["K0"] = K0;
  return j;
}

MapObject build_bump_psi() { return psi_function(); }

MapObject build_plateau_bump(double ell, const BumpParams& p, double lo) {
  if (!(ell > 0.0) || ell > p.ell0star * (1.0 + 1e-12))
    throw std::invalid_argument("build_plateau_bump: ell must lie in (0, ell0star]");
  return plateau_function(lo, ell, p.C * std::pow(ell, p.k) * p.mu(ell), p.D);
}

FastDiffeo build_fast_diffeo(Interval J, const BumpParams& p, bool allow_coarse) {
  double ell = J.length();
  if (!(ell > 0.0)) throw std::invalid_argument("build_fast_diffeo: empty interval");
  bool coarse = ell > p.ell0star * (1.0 + 1e-12);
  if (coarse && !allow_coarse) throw std::invalid_argument("build_fast_diffeo: |J| exceeds ell0star");
  FastDiffeo f;
  f.J = J;
  f.height = p.C * std::pow(ell, p.k) * p.mu(ell);
  f.coarse = coarse;
  f.map = plateau_diffeo(J.lo, ell, f.height, p.D);
  return f;
}

long designed_exponent(double ell, const BumpParams& p) {
  return static_cast<long>(std::ceil(1.0 / (std::pow(ell, p.k - 1) * p.mu(ell)) - 1e-12));
}

InfiniteProduct build_infinite_product(const std::vector<Interval>& J, const std::vector<long>& N,
                                       const BumpParams& p, double tail_tol, bool allow_coarse) {
  if (!N.empty() && N.size() != J.size()) throw std::invalid_argument("build_infinite_product: N and J differ in length");
  for (std::size_t i = 0; i < J.size(); ++i) {
    for (std::size_t j = i + 1; j < J.size(); ++j)
      if (J[i].lo < J[j].hi && J[j].lo < J[i].hi) throw std::invalid_argument("build_infinite_product: overlapping intervals");
    if (!N.empty()) {
      double ell = J[i].length();
      if (static_cast<double>(N[i]) * std::pow(ell, p.k - 1) * p.mu(ell) < 1.0 - 1e-12)
        throw std::invalid_argument("build_infinite_product: N_i ell_i^(k-1) mu(ell_i) < 1");
    }
  }
  InfiniteProduct out;
  // tail bound after keeping n factors: K0 sup_{i > n} mu(ell_i)
  std::vector<double> tail(J.size() + 1, 0.0);
  for (std::size_t i = J.size(); i-- > 0;) tail[i] = std::max(tail[i + 1], p.K0 * p.mu(J[i].length()));
  std::size_t n = J.size();
  for (std::size_t i = 0; i < J.size(); ++i)
    if (tail_tol > 0.0 && tail[i] < tail_tol) {
      n = i;
      out.certified = true;
      break;
    }
  std::vector<MapObject> maps;
  for (std::size_t i = 0; i < n; ++i) {
    out.factors.push_back(build_fast_diffeo(J[i], p, allow_coarse));
    maps.push_back(out.factors.back().map);
  }
  out.truncation = n;
  out.tail_bound = tail[n];
  out.map = disjoint_product(maps);
  return out;
}

double ladder_ell(long i, long kstar) {
  double t = static_cast<double>(i + kstar);
  double lg = std::log(t);
  return 1.0 / (t * lg * lg);
}

Interval LadderConfig::horizon_interval() const {
  double r = L.at(horizon + 1).lo;
  return {-r, r};
}

json LadderConfig::to_json() const {
  json j;
  j["k"] = k;
  j["mu"] = mu.descriptor();
  j["kstar"] = kstar;
  j["eps0"] = eps0;
  j["horizon"] = horizon;
  j["kappa"] = kappa;
  json rungs = json::array();
  for (std::size_t i = 1; i < L.size(); ++i)
    rungs.push_back({{"i", i}, {"ell", ell[i]}, {"N", N[i]}, {"lo", L[i].lo}, {"hi", L[i].hi}});
  j["rungs"] = rungs;
  return j;
}

LadderConfig build_ladder(int k, const Modulus& mu, long kstar, std::size_t horizon, double eps0) {
  if (kstar < 2) throw std::invalid_argument("build_ladder: K* must be at least 2");
  if (horizon < 1) throw std::invalid_argument("build_ladder: horizon must be positive");
  LadderConfig c;
  c.k = k;
  c.mu = mu;
  c.kstar = kstar;
  c.eps0 = eps0;
  c.horizon = horizon;
  std::size_t n = horizon + 1;
  c.ell.assign(n + 1, 0.0);
  c.N.assign(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    c.ell[i] = ladder_ell(static_cast<long>(i), kstar);
    c.N[i] = static_cast<long>(std::ceil(1.0 / (std::pow(c.ell[i], k - 1) * mu(c.ell[i])) - 1e-12));
  }
  c.kappa = c.ell[2] / (2.0 * c.ell[2] + c.ell[1]);
  if (!(c.kappa > 0.25)) throw std::invalid_argument("build_ladder: kappa <= 1/4, K* too small");
  if (!(c.kappa < 1.0 / 3.0)) throw std::invalid_argument("build_ladder: kappa >= 1/3");
  c.L.assign(n + 1, Interval{});
  c.L[1] = {3.0 - c.kappa * c.ell[1], 3.0 - c.kappa * c.ell[1] + c.ell[1]};
  for (std::size_t i = 1; i < n; ++i) {
    double lo = c.L[i].hi - c.kappa * c.ell[i];
    c.L[i + 1] = {lo, lo + c.ell[i + 1]};
  }
  for (std::size_t i = 2; i <= n; ++i)
    if (!(c.L[i - 1].hi > c.L[i].lo)) throw std::logic_error("build_ladder: consecutive rungs do not overlap");
  for (std::size_t i = 3; i <= n; ++i)
    if (!(c.L[i - 2].hi < c.L[i].lo)) throw std::logic_error("build_ladder: triple intersection");
  if (!(c.L[2].lo > c.Dp.hi)) throw std::logic_error("build_ladder: L_2 meets D");
  // the rung maps must be diffeomorphisms; the widest rung is the binding one
  BumpParams p = BumpParams::make(k, mu, eps0);
  double slope = 2.0 * p.C * std::pow(c.ell[1], k) * mu(c.ell[1]) / (p.D * c.ell[1]);
  if (!(slope < 1.0)) throw std::invalid_argument("build_ladder: first rung bump is not a diffeomorphism, raise K*");
  return c;
}

PLMap chart_conjugate(const PLMap& f) {
  using P = std::pair<Dyadic, Dyadic>;
  const std::vector<P> h = {{Dyadic(0), Dyadic(5, -2)},
                            {Dyadic(1, -1), Dyadic(7, -2)},
                            {Dyadic(3, -2), Dyadic(2)},
                            {Dyadic(1), Dyadic(3)}};
  auto piece = [](const std::vector<P>& t, const Dyadic& x, bool inv) {
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
      const Dyadic& x0 = inv ? t[j].second : t[j].first;
      const Dyadic& x1 = inv ? t[j + 1].second : t[j + 1].first;
      const Dyadic& y0 = inv ? t[j].first : t[j].second;
      const Dyadic& y1 = inv ? t[j + 1].first : t[j + 1].second;
      if (x >= x0 && x <= x1) {
        // slopes are powers of two, so the quotient is exact
        mpq_class s = (y1.to_mpq() - y0.to_mpq()) / (x1.to_mpq() - x0.to_mpq());
        mpq_class v = y0.to_mpq() + s * (x.to_mpq() - x0.to_mpq());
        v.canonicalize();
        long e = 0;
        mpz_class den = v.get_den();
        while (den > 1) {
          den /= 2;
          ++e;
        }
        return Dyadic(v.get_num(), -e);
      }
    }
    throw std::invalid_argument("chart_conjugate: point outside [0,1]");
  };
  if (f.is_identity()) return f;
  for (auto& q : f.points())
    if (q.first < Dyadic(0) || q.first > Dyadic(1)) throw std::invalid_argument("chart_conjugate: map not supported in [0,1]");
  // candidate breakpoints of h f h^-1 in source coordinates of f
  std::vector<Dyadic> xs;
  for (auto& q : f.points()) xs.push_back(q.first);
  for (auto& q : h) {
    xs.push_back(q.first);
    xs.push_back(f.inverse_eval(q.first));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<P> pts;
  for (auto& x : xs) pts.push_back({piece(h, x, false), piece(h, f.eval(x), false)});
  return PLMap(pts);
}

MapObject rho1_b_plus(const Interval& B) { return psi_bump_diffeo(B.lo, B.hi, 0.2 * B.length() / bump::psi_norm(1)); }

json Phi::to_json() const {
  json j;
  j["config"] = config.to_json();
  j["params"] = params.to_json();
  j["height_modulus"] = height_modulus.descriptor();
  j["u_dagger"] = u_dagger.str();
  j["x1"] = x1;
  j["representation"] = rep.to_json();
  return j;
}

Phi build_phi(const LadderConfig& config, const BumpParams& params, const Modulus* height_modulus) {
  Phi phi;
  phi.config = config;
  phi.params = params;
  phi.height_modulus = height_modulus ? *height_modulus : params.mu;
  phi.u_dagger = build_u_dagger();
  phi.rho0 = build_pingpong(phi.u_dagger, config.I0);
  phi.x1 = phi.rho0.x.front();

  BumpParams hp = params;
  hp.mu = phi.height_modulus;
  std::vector<MapObject> ra, rb;
  phi.rungs.assign(config.horizon + 1, FastDiffeo{});
  for (std::size_t i = 1; i <= config.horizon; ++i) {
    FastDiffeo f = build_fast_diffeo(config.Lplus(i), hp, true);
    phi.rungs[i] = f;
    auto& dst = ladder_generator(i) == 'a' ? ra : rb;
    dst.push_back(f.map);
    dst.push_back(mirror(f.map));
  }
  phi.rho2_a = disjoint_product(ra);
  phi.rho2_b = disjoint_product(rb);

  MapObject b1 = rho1_b_plus(config.Bp);
  ThompsonPL F = build_thompson_pl();
  const PLMap& f1 = F.f1;
  const PLMap& f2 = F.f2;
  MapObject cp = pl_map(chart_conjugate(f1)), dp = pl_map(chart_conjugate(f2));
  const auto& r0 = phi.rho0.rep;

  std::vector<MapObject> ga = {r0.gen('a')}, gb = {b1, mirror(b1)};
  for (auto& m : ra) ga.push_back(m);
  for (auto& m : rb) gb.push_back(m);
  MapObject a = disjoint_product(ga);
  MapObject b = disjoint_product(gb);
  MapObject c = disjoint_product({r0.gen('c'), cp, mirror(cp)});
  MapObject d = disjoint_product({r0.gen('d'), dp, mirror(dp)});
  MapObject e = r0.gen('e');
  double R = config.Lplus(config.horizon).hi;
  phi.rep = Representation({a, b, c, d, e}, {-R, R}, "phi");
  phi.cover = Cover::from_representation(phi.rep, config.horizon_interval());
  return phi;
}

}  // namespace crg
