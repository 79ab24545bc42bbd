#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "critreg/analysis.hpp"
#include "critreg/nodes.hpp"
#include "critreg/pingpong.hpp"
#include "critreg/tricks.hpp"

using namespace crg;

namespace {

QInterval exact_hull(const PLMap& f) {
  auto s = f.support();
  REQUIRE_FALSE(s.empty());
  return {s.front().lo, s.back().hi};
}

bool exact_overlap(const QInterval& a, const QInterval& b) { return a.lo < b.hi && b.lo < a.hi; }

}  // namespace

TEST_CASE("Thompson pair") {
  ThompsonPL t = build_thompson_pl();
  CHECK(t.relators_hold);
  CHECK(t.f1 == t.x1.inverse() * t.x0);
  CHECK(t.f2 == t.x1);
  CHECK(t.x0.eval(Dyadic(1, -2)) == Dyadic(1, -1));
}

TEST_CASE("chain group trick with trivial G") {
  ChainTrick c = chain_group_trick(PLMap::identity());
  REQUIRE(c.ustar.size() == 3);
  CHECK(c.ustar[0] == c.a1.inverse() * c.a0);
  CHECK(c.g1.is_identity());
  CHECK(c.chain);
}

TEST_CASE("chain group trick with a one-generator G") {
  // g: a PL bump inside (1/4, 3/4)
  PLMap g = pl_interval_map(Dyadic(1, -2), Dyadic(3, -3), Dyadic(1, -1), Dyadic(3, -2), Dyadic(3, -3), Dyadic(5, -3));
  ChainTrick c = chain_group_trick(g);
  REQUIRE(c.ustar.size() == 3);
  CHECK(c.chain);
  // exact chain condition on the supports
  std::vector<QInterval> h;
  for (auto& u : c.ustar) h.push_back(exact_hull(u));
  CHECK(exact_overlap(h[0], h[1]));
  CHECK(exact_overlap(h[1], h[2]));
  CHECK_FALSE(exact_overlap(h[0], h[2]));
  CHECK(h[0].lo < h[1].lo);
  CHECK(h[1].hi < h[2].hi);
  for (auto& q : h) {
    CHECK(q.lo >= 0);
    CHECK(q.hi <= 1);
  }
  // the squeezed copy of G sits in (t0, f1(t0))
  auto s = c.g1.support();
  REQUIRE_FALSE(s.empty());
  CHECK(s.front().lo >= c.t0.to_mpq());
  CHECK(s.back().hi <= c.f1.eval(c.t0).to_mpq());
  CHECK(c.s2 == c.a1.power(-2).compose(c.a0).eval(c.s1));
  // a G-support that does not fit is refused
  PLMap wide = build_thompson_pl().x0.conjugate_affine(0, Dyadic(-1, -1));
  REQUIRE(wide.support().front().lo < 0);
  CHECK_THROWS(chain_group_trick(wide));
}

TEST_CASE("orbit of 0.3 meets every window of width 2^-6") {
  PLMap g = pl_interval_map(Dyadic(1, -2), Dyadic(3, -3), Dyadic(1, -1), Dyadic(3, -2), Dyadic(3, -3), Dyadic(5, -3));
  ChainTrick c = chain_group_trick(g);
  OrbitCoverage o = orbit_windows(c.ustar, Dyadic::from_double(0.3), 6, 100000);
  CHECK(o.windows == 64);
  CHECK(o.complete);
  CHECK(o.steps <= 100000);
  // with a tiny budget the search reports partial coverage
  OrbitCoverage p = orbit_windows(c.ustar, Dyadic::from_double(0.3), 6, 5);
  CHECK_FALSE(p.complete);
  CHECK(p.windows_hit < 64);
}

TEST_CASE("rank trick") {
  PingPong pp = build_pingpong(build_u_dagger());
  const Representation& rho = pp.rep;
  std::vector<Interval> gaps{{-2.0, -1.5}, {-3.0, -2.5}, {-4.0, -3.5}, {-5.0, -4.5}};
  Representation r4 = rank_trick(rho, gaps, 4);
  auto grid = uniform_grid({-5.5, pp.support.hi + 0.5}, 3000);
  // commutators are unchanged
  for (const char* w : {"a d a^-1 d^-1", "b c b^-1 c^-1", "a e a^-1 e^-2", "d^2 a d^-2 a^-1"}) {
    Word x = Word::parse(w);
    for (double p : grid) CHECK(r4.act(x, p) == doctest::Approx(rho.act(x, p)).epsilon(1e-12));
  }
  // generator v moves only the gap of its abelianization coordinate
  const char gens[] = {'a', 'b', 'c', 'd'};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      double mid = 0.5 * (gaps[j].lo + gaps[j].hi);
      double moved = std::abs(r4.gen(gens[i])(mid) - mid);
      if (i == j)
        CHECK(moved > 1e-6);
      else
        CHECK(moved == 0.0);
    }
  }
  // e is killed in homology and keeps its action
  for (double p : grid) CHECK(r4.gen('e')(p) == rho.gen('e')(p));
  CHECK_THROWS(rank_trick(rho, {{-2.0, -1.5}}, 2));
  CHECK_THROWS(rank_trick(rho, {{-2.0, -1.5}, {-1.8, -1.2}}, 2));
  CHECK_THROWS(rank_trick(rho, gaps, 5));
}

TEST_CASE("compactification") {
  MapObject id = compactify(identity_map());
  for (double x = 0.0; x <= 1.0; x += 0.05) CHECK(id(x) == doctest::Approx(x).epsilon(1e-15));
  MapObject g = polynomial_map({0.0, 1.25, -0.25}, 0.0, 1.0);
  MapObject h = polynomial_map({0.0, 0.5, 0.5}, 0.0, 1.0);
  MapObject Pg = compactify(g), Ph = compactify(h), Pgh = compactify(compose(g, h));
  for (double x = 0.02; x < 1.0; x += 0.02) {
    CHECK(Pgh(x) == doctest::Approx(Pg(Ph(x))).epsilon(1e-9));
    CHECK(Pg(x) > 0.0);
    CHECK(Pg(x) < 1.0);
  }
  CHECK(Pg(0.0) == 0.0);
  CHECK(Pg(1.0) == 1.0);
  // Phi(x^2) = x / (1 + x log 2) near 0, so the difference quotient tends to 1
  MapObject sq = compactify(polynomial_map({0.0, 0.0, 1.0}, 0.0, 1.0));
  for (double hh : {0.1, 0.05, 0.025}) {
    double x = std::exp(-1.0 / hh);
    CHECK(std::abs(sq(x) / x - 1.0) < 1e-4);
    CHECK(sq(x) / x == doctest::Approx(1.0 / (1.0 + x * std::log(2.0))).epsilon(1e-9));
  }
  CHECK_THROWS(compactify(translation(0.1)));
}

TEST_CASE("compactification flatness report") {
  MapObject g = polynomial_map({0.0, 1.25, -0.25}, 0.0, 1.0);
  for (bool at_one : {false, true}) {
    FlatnessReport r = compactify_flatness(g, 2, at_one, 8);
    CHECK(r.h.size() == 8);
    CHECK(r.worst < 1e-4);
    for (auto& d : r.diffs)
      for (double v : d) CHECK(std::abs(v) <= r.worst);
  }
}
