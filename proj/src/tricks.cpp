#include "critreg/tricks.hpp"

#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

#include "critreg/bump.hpp"
#include "critreg/covering.hpp"
#include "critreg/nodes.hpp"

namespace crg {

ThompsonPL build_thompson_pl() {
  ThompsonPL t;
  t.x0 = PLMap({{Dyadic(0), Dyadic(0)}, {Dyadic(1, -2), Dyadic(1, -1)}, {Dyadic(1, -1), Dyadic(3, -2)}, {Dyadic(1), Dyadic(1)}});
  t.x1 = PLMap({{Dyadic(1, -1), Dyadic(1, -1)},
                {Dyadic(5, -3), Dyadic(3, -2)},
                {Dyadic(3, -2), Dyadic(7, -3)},
                {Dyadic(1), Dyadic(1)}});
  t.f1 = t.x1.inverse() * t.x0;
  t.f2 = t.x1;
  // the relators, written for right actions; PLMap * composes right to left
  PLMap u = t.x1.inverse() * t.x0;
  PLMap v1 = t.x0 * t.x1 * t.x0.inverse();
  PLMap v2 = t.x0.power(2) * t.x1 * t.x0.power(-2);
  t.relators_hold = commutator(u, v1).is_identity() && commutator(u, v2).is_identity();
  return t;
}

Representation rank_trick(const Representation& rho, const std::vector<Interval>& gaps, std::size_t m) {
  if (m > 4) throw std::invalid_argument("rank_trick: the abelianization has rank 4");
  if (gaps.size() < m) throw std::invalid_argument("rank_trick: not enough gap intervals");
  std::vector<MapObject> h;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& g = gaps[i];
    if (!(g.length() > 0.0)) throw std::invalid_argument("rank_trick: empty gap");
    for (std::size_t j = 0; j < i; ++j)
      if (gaps[j].lo < g.hi && g.lo < gaps[j].hi) throw std::invalid_argument("rank_trick: gaps overlap");
    for (char v : std::string("abcde"))
      for (auto& s : rho.gen(v).support())
        if (s.lo < g.hi && g.lo < s.hi) throw std::invalid_argument("rank_trick: gap meets the support of rho");
    h.push_back(psi_bump_diffeo(g.lo, g.hi, 0.25 * g.length() / bump::psi_norm(1)));
  }
  std::array<MapObject, 5> gens;
  Interval amb = rho.ambient();
  for (auto& g : gaps) {
    amb.lo = std::min(amb.lo, g.lo);
    amb.hi = std::max(amb.hi, g.hi);
  }
  const std::string names = "abcde";
  for (std::size_t v = 0; v < 5; ++v) {
    auto alpha = abelianization(Word::gen(names[v]));
    std::vector<MapObject> extra;
    for (std::size_t i = 0; i < m; ++i)
      if (alpha[i] != 0) extra.push_back(power(h[i], alpha[i]));
    MapObject bumps = disjoint_product(extra);
    gens[v] = compose(rho.gen(names[v]), bumps);
  }
  return Representation(gens, amb, rho.name() + "+rank");
}

namespace {

Interval pl_hull(const PLMap& f) {
  auto s = f.support();
  if (s.empty()) return {0.0, 0.0};
  return {s.front().lo.get_d(), s.back().hi.get_d()};
}

}  // namespace

ChainTrick chain_group_trick(const PLMap& g) {
  for (auto& c : g.support())
    if (c.lo < 0 || c.hi > 1) throw std::invalid_argument("chain_group_trick: g not supported in [0,1]");
  ThompsonPL F = build_thompson_pl();
  ChainTrick t;
  t.a0 = F.x0;
  t.a1 = F.x1;
  t.s1 = Dyadic(1, -1);
  t.s2 = t.a1.power(-2).compose(t.a0).eval(t.s1);  // 9/16
  t.s3 = Dyadic(5, -3);
  t.s4 = Dyadic(3, -2);
  // x0 squeezed affinely into (s2, s3)
  t.f1 = F.x0.conjugate_affine(-4, t.s2);
  t.t0 = Dyadic(37, -6);
  Dyadic ft0 = t.f1.eval(t.t0);
  if (!(t.s2 < t.t0 && ft0 < t.s3)) throw std::logic_error("chain_group_trick: t0 misplaced");
  // g conjugated into (t0, f1(t0)); g fixes 0 and 1 so only its interior moves
  Dyadic w = ft0 - t.t0;
  long e = w.exp();  // w is a power of two
  if (w.num() != 1) throw std::logic_error("chain_group_trick: window width not dyadic power");
  t.g1 = g.conjugate_affine(e, t.t0);
  auto hg = pl_hull(t.g1);
  if (!t.g1.is_identity() && !(hg.lo >= t.t0.to_double() && hg.hi <= ft0.to_double()))
    throw std::invalid_argument("chain_group_trick: support of G not inside (t0, f1(t0))");
  t.u = {t.a1, t.a1 * t.g1};
  const PLMap& u0 = t.u[0];
  const PLMap& u1 = t.u[1];
  t.ustar = {u0.inverse() * t.a0, t.a0 * u1.inverse() * t.a0.inverse() * u0, t.a0 * u1 * t.a0.inverse()};
  for (auto& m : t.ustar) t.hulls.push_back(pl_hull(m));
  t.chain = is_chain(t.hulls);
  return t;
}

OrbitCoverage orbit_windows(const std::vector<PLMap>& gens, const Dyadic& x, int depth, std::size_t budget) {
  std::vector<PLMap> all;
  for (auto& g : gens) {
    all.push_back(g);
    all.push_back(g.inverse());
  }
  OrbitCoverage r;
  r.windows = std::size_t{1} << depth;
  std::vector<bool> hit(r.windows, false);
  auto window = [&](const Dyadic& p) {
    double v = std::ldexp(p.to_double(), depth);
    auto j = static_cast<long>(std::floor(v));
    return static_cast<std::size_t>(std::clamp<long>(j, 0, static_cast<long>(r.windows) - 1));
  };
  std::set<std::pair<long, std::string>> seen;
  auto key = [](const Dyadic& p) { return std::make_pair(p.exp(), p.num().get_str()); };
  std::deque<Dyadic> q{x};
  seen.insert(key(x));
  while (!q.empty() && r.steps < budget) {
    Dyadic p = q.front();
    q.pop_front();
    ++r.steps;
    auto w = window(p);
    if (!hit[w]) {
      hit[w] = true;
      if (++r.windows_hit == r.windows) break;
    }
    for (auto& g : all) {
      Dyadic y = g.eval(p);
      if (seen.insert(key(y)).second) q.push_back(y);
    }
  }
  r.complete = r.windows_hit == r.windows;
  return r;
}

MapObject compactify(const MapObject& g) {
  if (std::abs(g.eval(0.0)) > 1e-12 || std::abs(g.eval(1.0) - 1.0) > 1e-12)
    throw std::invalid_argument("compactify: g must fix 0 and 1");
  return compactify_map(g);
}

}  // namespace crg
