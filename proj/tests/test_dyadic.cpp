#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "critreg/dyadic.hpp"
#include "critreg/tricks.hpp"

using namespace crg;

namespace {

Dyadic random_dyadic(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-100000, 100000), ex(-40, 10);
  return Dyadic(mpz_class(num(rng)), ex(rng));
}

// PL interpolation through a breakpoint table, done in mpq
mpq_class interp(const std::vector<std::pair<mpq_class, mpq_class>>& t, const mpq_class& x) {
  if (x <= t.front().first || x >= t.back().first) return x;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (x <= t[i].first) {
      mpq_class s = (t[i].second - t[i - 1].second) / (t[i].first - t[i - 1].first);
      return t[i - 1].second + s * (x - t[i - 1].first);
    }
  return x;
}

PLMap random_pl(std::mt19937_64& rng) {
  // random increasing dyadic breakpoints with power-of-two slopes: build by composing
  // interval maps
  std::uniform_int_distribution<int> pick(1, 7);
  PLMap f;
  for (int r = 0; r < 3; ++r) {
    int a = pick(rng);
    Dyadic lo(0), hi(1);
    Dyadic A = Dyadic(a, -3), B = Dyadic(a, -3) + Dyadic(1, -4);
    Dyadic Cc = Dyadic(a, -3) + Dyadic(1, -5), Dd = Dyadic(a, -3) + Dyadic(1, -4);
    f = f * pl_interval_map(lo, A, B, hi, Cc, Dd);
  }
  return f;
}

}  // namespace

TEST_CASE("dyadic arithmetic agrees with mpq") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 2000; ++t) {
    Dyadic x = random_dyadic(rng), y = random_dyadic(rng);
    mpq_class qx = x.to_mpq(), qy = y.to_mpq();
    CHECK((x + y).to_mpq() == qx + qy);
    CHECK((x - y).to_mpq() == qx - qy);
    CHECK((x * y).to_mpq() == qx * qy);
    CHECK((cmp(x, y) < 0) == (qx < qy));
    CHECK((x == y) == (qx == qy));
  }
}

TEST_CASE("dyadic normal form, parsing and printing") {
  CHECK(Dyadic(4, 0) == Dyadic(1, 2));
  CHECK(Dyadic(6, -3).num() == 3);
  CHECK(Dyadic(6, -3).exp() == -2);
  CHECK(Dyadic(0, 5).exp() == 0);
  CHECK(Dyadic::parse("13/64") == Dyadic(13, -6));
  CHECK(Dyadic::parse("-3") == Dyadic(-3));
  CHECK(Dyadic::parse("13/64").str() == "13/64");
  CHECK(Dyadic::from_double(0.375) == Dyadic(3, -3));
  CHECK(Dyadic(3, -3).to_double() == 0.375);
  CHECK_THROWS(Dyadic::parse("1/3"));
}

TEST_CASE("Thompson generators on their breakpoint tables") {
  ThompsonPL t = build_thompson_pl();
  CHECK(t.x0.eval(Dyadic(1, -3)) == Dyadic(1, -2));
  CHECK(t.x0.eval(Dyadic(1, -2)) == Dyadic(1, -1));
  CHECK(t.x0.eval(Dyadic(1, -1)) == Dyadic(3, -2));
  for (long n = 1; n < 8; ++n) {
    Dyadic x(n, -4);
    CHECK(t.x1.eval(x) == x);  // x1 fixes [0, 1/2]
  }
  CHECK(t.x1.eval(Dyadic(5, -3)) == Dyadic(3, -2));
  auto s = t.x1.support();
  REQUIRE(s.size() == 1);
  CHECK(s[0].lo == mpq_class(1, 2));
  CHECK(s[0].hi == 1);
  CHECK(t.x0.slope(Dyadic(0)) == Dyadic(2));
  CHECK(t.x0.slope(Dyadic(3, -2)) == Dyadic(1, -1));
}

TEST_CASE("Thompson relators hold exactly") {
  ThompsonPL t = build_thompson_pl();
  CHECK(t.relators_hold);
  // independent check with the words read as right actions: (g h)(x) = h(g(x))
  auto R = [](const PLMap& g, const PLMap& h) { return h * g; };
  PLMap A = R(t.x0, t.x1.inverse());
  PLMap B1 = R(R(t.x0.inverse(), t.x1), t.x0);
  PLMap B2 = R(R(t.x0.power(-2), t.x1), t.x0.power(2));
  auto comm = [&](const PLMap& g, const PLMap& h) { return R(R(R(g, h), g.inverse()), h.inverse()); };
  CHECK(comm(A, B1).is_identity());
  CHECK(comm(A, B2).is_identity());
  // the generators themselves do not commute
  CHECK_FALSE(commutator(t.x0, t.x1).is_identity());
}

TEST_CASE("PL evaluation matches mpq interpolation of the breakpoints") {
  ThompsonPL t = build_thompson_pl();
  for (const PLMap& f : {t.x0, t.x1, t.f1, t.x0 * t.x1.inverse()}) {
    std::vector<std::pair<mpq_class, mpq_class>> tab;
    for (auto& [x, y] : f.points()) tab.push_back({x.to_mpq(), y.to_mpq()});
    for (long n = -3; n <= 67; ++n) {
      Dyadic x(n, -6);
      CHECK(f.eval(x).to_mpq() == interp(tab, x.to_mpq()));
      CHECK(f.eval(x.to_mpq()) == interp(tab, x.to_mpq()));
      CHECK(f.eval(x.to_double()) == doctest::Approx(interp(tab, x.to_mpq()).get_d()).epsilon(1e-15));
    }
  }
}

TEST_CASE("group laws for PL maps") {
  std::mt19937_64 rng(5);
  ThompsonPL t = build_thompson_pl();
  std::vector<PLMap> pool{t.x0, t.x1, t.f1};
  for (int i = 0; i < 5; ++i) pool.push_back(random_pl(rng));
  for (const auto& f : pool) {
    CHECK((f * f.inverse()).is_identity());
    CHECK((f.inverse() * f).is_identity());
    CHECK(f.power(3) == f * f * f);
    CHECK((f.power(5) * f.power(-5)).is_identity());
    CHECK(f.power(0).is_identity());
    for (long n = 0; n <= 16; ++n) {
      Dyadic x(n, -4);
      CHECK(f.inverse_eval(f.eval(x)) == x);
      CHECK(f.inverse().eval(x) == f.inverse_eval(x));
    }
    for (const auto& g : pool)
      for (const auto& h : pool) CHECK((f * g) * h == f * (g * h));
  }
  for (const auto& f : pool)
    for (const auto& g : pool)
      for (long n = 0; n <= 16; ++n) {
        Dyadic x(n, -4);
        CHECK((f * g).eval(x) == f.eval(g.eval(x)));
      }
}

TEST_CASE("interval maps and affine conjugation") {
  Dyadic lo(0), a(1, -2), b(1, -1), hi(1), c(1, -3), d(3, -2);
  PLMap f = pl_interval_map(lo, a, b, hi, c, d);
  CHECK(f.eval(a) == c);
  CHECK(f.eval(b) == d);
  CHECK(f.eval(Dyadic(-1)) == Dyadic(-1));
  CHECK(f.eval(Dyadic(2)) == Dyadic(2));
  // slopes are powers of two
  for (long n = 0; n < 32; ++n) {
    Dyadic s = f.slope(Dyadic(n, -5));
    CHECK(s.num() == 1);
  }
  // A f A^-1 with A(x) = 4 x + 3/8
  ThompsonPL t = build_thompson_pl();
  PLMap g = t.x0.conjugate_affine(2, Dyadic(3, -3));
  for (long n = 0; n <= 16; ++n) {
    Dyadic x(n, -4);
    Dyadic Ax = x.mul_pow2(2) + Dyadic(3, -3);
    CHECK(g.eval(Ax) == t.x0.eval(x).mul_pow2(2) + Dyadic(3, -3));
  }
}

TEST_CASE("support of a product of disjoint bumps has two components") {
  Dyadic z(0);
  PLMap f = pl_interval_map(z, Dyadic(1, -3), Dyadic(1, -2), Dyadic(3, -3), Dyadic(1, -3), Dyadic(5, -4));
  PLMap g = pl_interval_map(Dyadic(1, -1), Dyadic(5, -3), Dyadic(3, -2), Dyadic(1), Dyadic(5, -3), Dyadic(13, -4));
  auto s = (f * g).support();
  REQUIRE(s.size() == 2);
  CHECK(s[0].hi <= s[1].lo);
  CHECK((f * g) == (g * f));
}
