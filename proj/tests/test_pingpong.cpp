#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "critreg/analysis.hpp"
#include "critreg/pingpong.hpp"

using namespace crg;

namespace {

double moved(const Representation& r, const Word& w, Interval I, std::size_t n = 2000) {
  return displacement_sup(r, w, uniform_grid(I, n));
}

}  // namespace

TEST_CASE("single block: t carries x1 across the block to x3") {
  PingPong p = build_pingpong(Word::gen('d'));
  REQUIRE(p.x.size() == 3);
  REQUIRE(p.z.size() == 2);
  CHECK(p.x[0] == doctest::Approx(1.5));
  // supp t = (z1, z2), so the image stays below z2
  CHECK(p.rep.act(p.element, p.x[0]) == doctest::Approx(p.x[2]).epsilon(1e-12));
  CHECK(p.x[2] > 2.0);
  CHECK(p.x[2] < p.z[1]);
  CHECK(p.rep.act(p.element, p.z[1]) == p.z[1]);
  CHECK(p.rep.act(p.conjugator.inverse() * Word::gen('d') * p.conjugator, p.x[0]) ==
        doctest::Approx(p.rep.act(p.element, p.x[0])));
}

TEST_CASE("u dagger acts nontrivially") {
  Word u = build_u_dagger();
  PingPong p = build_pingpong(u);
  CHECK(equal_in_group(p.element, p.conjugator.inverse() * u * p.conjugator));
  double x1 = p.x.front();
  double end = p.x.back();
  CHECK(p.rep.act(p.element, x1) == doctest::Approx(end).epsilon(1e-9));
  CHECK(end > x1);
  CHECK(moved(p.rep, u, p.support) > 1e-6);
  // supp phi_g is the connected interval (1, z_{l+1})
  CHECK(p.support.lo == doctest::Approx(1.0));
  CHECK(p.support.hi == doctest::Approx(p.z.back()));
  IntervalSet s = numeric_support(p.rep.map_of(Word::gen('d')), {0.0, p.support.hi + 1.0}, 20000);
  REQUIRE_FALSE(s.empty());
  CHECK(s.front().lo >= p.support.lo - 1e-9);
  CHECK(s.back().hi <= p.support.hi + 1e-9);
}

TEST_CASE("relators hold in the ping-pong representation") {
  for (const char* g : {"d", "c d^2 e", "a d c^-1 d^-1 e^3 d"}) {
    PingPong p = build_pingpong(Word::parse(g));
    auto grid = uniform_grid({0.0, p.support.hi + 0.5}, 1000);
    CHECK(relator_residual(p.rep, Word::parse("a e a^-1"), Word::parse("e^2"), grid) < 1e-9);
    CHECK(relator_residual(p.rep, Word::parse("c a"), Word::parse("a c"), grid) < 1e-9);
    CHECK(relator_residual(p.rep, Word::parse("c e"), Word::parse("e c"), grid) < 1e-9);
    for (double x : grid) CHECK(p.rep.gen('b')(x) == x);
  }
}

TEST_CASE("rescaling onto a target interval") {
  PingPong raw = build_pingpong(build_u_dagger());
  PingPong p = build_pingpong(build_u_dagger(), {-0.9, 0.9});
  CHECK(p.support.lo >= -0.9);
  CHECK(p.support.hi <= 0.9);
  CHECK(p.rep.act(p.element, p.x.front()) > p.x.front());
  double s = (raw.rep.act(raw.element, raw.x.front()) - raw.x.front()) / (raw.support.hi - raw.support.lo);
  double t = (p.rep.act(p.element, p.x.front()) - p.x.front()) / (p.support.hi - p.support.lo);
  CHECK(s == doctest::Approx(t).epsilon(1e-6));
}

TEST_CASE("argument errors") {
  CHECK_THROWS_AS(build_pingpong(Word()), std::invalid_argument);
  CHECK_THROWS_AS(build_pingpong(Word::parse("a e a^-1 e^-2")), std::invalid_argument);
  CHECK_THROWS_AS(build_pingpong(Word::gen('b')), std::invalid_argument);
}

TEST_CASE("soundness: nontrivial words move some point") {
  // letters from a, c, d, e; b is killed by the ping-pong action
  std::mt19937_64 rng(17);
  const char gens[] = {'a', 'c', 'd', 'e'};
  std::uniform_int_distribution<int> g(0, 3), e(-2, 2);
  std::size_t tested = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<Letter> ls;
    for (int i = 0; i < 1 + t % 8; ++i) {
      int n = e(rng);
      if (n != 0) ls.push_back({gens[g(rng)], n});
    }
    Word w(ls);
    if (is_identity(w)) continue;
    PingPong p = build_pingpong(w);
    CAPTURE(w.str());
    CHECK(moved(p.rep, w, {p.support.lo, p.support.hi}) > 1e-6);
    ++tested;
  }
  CHECK(tested > 800);
}
