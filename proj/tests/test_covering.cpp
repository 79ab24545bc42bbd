#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "critreg/covering.hpp"

using namespace crg;

namespace {

// [x, y] is inside a union of open intervals iff every endpoint falling in [x, y], x, y
// and every midpoint between consecutive such points lies in some member.
bool union_covers(const std::vector<Interval>& ivs, double x, double y) {
  std::vector<double> pts{x, y};
  for (auto& iv : ivs) {
    if (iv.lo > x && iv.lo < y) pts.push_back(iv.lo);
    if (iv.hi > x && iv.hi < y) pts.push_back(iv.hi);
  }
  std::sort(pts.begin(), pts.end());
  auto in = [&](double p) {
    for (auto& iv : ivs)
      if (iv.contains(p)) return true;
    return false;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!in(pts[i])) return false;
    if (i + 1 < pts.size() && !in(0.5 * (pts[i] + pts[i + 1]))) return false;
  }
  return true;
}

// minimum over all subcovers, or -1 when none covers
long brute_cl(const std::vector<Interval>& ivs, double x, double y) {
  long best = -1;
  std::size_t n = ivs.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    long k = __builtin_popcountll(mask);
    if (best >= 0 && k >= best) continue;
    std::vector<Interval> sub;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) sub.push_back(ivs[i]);
    if (union_covers(sub, x, y)) best = k;
  }
  return best;
}

Cover make_cover(const std::vector<Interval>& ivs, Interval horizon = {-kInf, kInf}) {
  std::vector<CoverInterval> items;
  for (std::size_t i = 0; i < ivs.size(); ++i) items.push_back({ivs[i], "abcde"[i % 5], static_cast<int>(i / 5)});
  return Cover(items, horizon);
}

MapObject push_right(double lo, double hi) {
  // PL bump on (lo, hi) sending the first quarter point to the midpoint; lo, hi dyadic
  Dyadic L = Dyadic::from_double(lo), H = Dyadic::from_double(hi);
  Dyadic w = (H - L).mul_pow2(-2);
  return pl_map(pl_interval_map(L, L + w, L + w + w, H, L + w + w, L + w + w + w));
}

Representation two_bumps() {
  MapObject id = identity_map();
  return Representation({push_right(0.0, 0.5), push_right(0.25, 1.0), id, id, id}, {0.0, 1.0}, "two-bumps");
}

}  // namespace

TEST_CASE("covering length examples") {
  Cover c = make_cover({{0.0, 0.5}, {0.4, 1.0}, {2.0, 3.0}});
  CHECK(covering_length(c, IntervalSet{}).value == 0);
  CHECK(covering_length(c, 0.1, 0.3).value == 1);
  CHECK(covering_length(c, 0.1, 0.9).value == 2);
  CHECK(covering_distance(c, 0.3, 0.3).value == 0);
  CHECK(covering_distance(c, 0.9, 0.1).value == 2);
  auto inf = covering_distance(c, 0.5, 2.5);
  CHECK(inf.infinite);
  CHECK(inf.str() == "inf");
  CHECK(covering_length(c, IntervalSet{{0.1, 0.2}, {2.1, 2.2}}).value == 2);
}

TEST_CASE("greedy equals the brute-force minimum over subcovers") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0), W(0.05, 0.4);
  std::size_t finite = 0;
  for (int t = 0; t < 400; ++t) {
    std::size_t n = 1 + static_cast<std::size_t>(t) % 12;
    std::vector<Interval> ivs;
    for (std::size_t i = 0; i < n; ++i) {
      double lo = U(rng) * 1.1 - 0.1, w = W(rng);
      ivs.push_back({lo, lo + w});
    }
    double x = U(rng), y = U(rng);
    if (x > y) std::swap(x, y);
    Cover c = make_cover(ivs);
    long b = brute_cl(ivs, x, y);
    CoverResult r = covering_length(c, x, y);
    CAPTURE(t);
    if (b < 0) {
      CHECK(r.infinite);
    } else {
      ++finite;
      CHECK_FALSE(r.infinite);
      CHECK(r.value == b);
      ChainWitness w = minimal_chain(c, x, y);
      CHECK(static_cast<long>(w.chain.size()) == b);
      std::vector<Interval> ch;
      for (auto& ci : w.chain) ch.push_back(ci.iv);
      CHECK(is_chain(ch));
      CHECK(union_covers(ch, x, y));
    }
  }
  CHECK(finite > 100);
}

TEST_CASE("minimal chains") {
  Cover one = make_cover({{0.0, 1.0}});
  CHECK(minimal_chain(one, 0.2, 0.4).chain.size() == 1);
  // four-link layout, with redundant members the greedy must skip
  Cover c = make_cover({{0.0, 0.3}, {0.2, 0.55}, {0.25, 0.35}, {0.5, 0.8}, {0.75, 1.0}, {0.6, 0.7}});
  ChainWitness w = minimal_chain(c, 0.1, 0.9);
  REQUIRE(w.chain.size() == 4);
  for (std::size_t i = 0; i + 1 < 4; ++i) {
    const Interval &U = w.chain[i].iv, &V = w.chain[i + 1].iv;
    CHECK(U.lo < V.lo);
    CHECK(V.lo < U.hi);
    CHECK(U.hi < V.hi);
  }
  CHECK(w.chain[0].iv.contains(0.1));
  CHECK_FALSE(w.chain[1].iv.contains(0.1));
  CHECK(w.chain[3].iv.contains(0.9));
  CHECK_FALSE(w.chain[2].iv.contains(0.9));
  auto j = w.to_json();
  CHECK(j.at("chain").size() == 4);
  CHECK_THROWS_AS(minimal_chain(c, 0.1, 1.5), NoCoverError);
  CHECK(is_chain({{0, 2}, {1, 3}, {2.5, 4}}));
  CHECK_FALSE(is_chain({{0, 2}, {1, 3}, {1.5, 4}}));
  CHECK_FALSE(is_chain({{0, 2}, {2, 3}}));
}

TEST_CASE("horizon gives lower bounds") {
  Cover c = make_cover({{0.0, 0.3}, {0.2, 0.55}, {0.5, 0.8}, {0.75, 1.0}}, {0.0, 0.6});
  auto inside = covering_length(c, 0.1, 0.4);
  CHECK_FALSE(inside.lower_bound);
  auto beyond = covering_length(c, 0.1, 0.9);
  CHECK(beyond.lower_bound);
  CHECK(beyond.value >= 2);
}

TEST_CASE("triangle inequality and subadditivity") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Cover c = make_cover({{-0.1, 0.15}, {0.1, 0.3}, {0.2, 0.45}, {0.4, 0.6}, {0.55, 0.62}, {0.58, 0.9}, {0.85, 1.1}});
  for (int t = 0; t < 1000; ++t) {
    double x = U(rng), y = U(rng), z = U(rng);
    auto xy = covering_distance(c, x, y), xz = covering_distance(c, x, z), zy = covering_distance(c, z, y);
    CHECK(xy.value <= xz.value + zy.value);
    double a = U(rng), b = U(rng);
    IntervalSet A{{std::min(x, y), std::max(x, y)}}, B{{std::min(a, b), std::max(a, b)}};
    IntervalSet AB = merge_sets(A, B);
    CHECK(covering_length(c, AB).value <= covering_length(c, A).value + covering_length(c, B).value);
  }
}

TEST_CASE("cover from a representation uses support components") {
  Representation r = two_bumps();
  Cover c = Cover::from_representation(r);
  REQUIRE(c.items().size() == 2);
  CHECK(c.items()[0].gen == 'a');
  CHECK(c.items()[0].iv == Interval{0.0, 0.5});
  CHECK(c.items()[1].gen == 'b');
  CHECK(c.best_at(0.3) == 1);
  CHECK(c.best_at(0.1) == 0);
  CHECK(c.best_at(1.5) == -1);
}

TEST_CASE("slide") {
  Representation r = two_bumps();
  Cover c = Cover::from_representation(r);
  SUBCASE("one syllable") {
    ChainWitness w = minimal_chain(c, 0.05, 0.45);
    Word g = slide(r, w);
    CHECK(syllable_length(g) == 1);
    CHECK(r.act(g, 0.05) > 0.45);
  }
  SUBCASE("two syllables along a chain of two PL bumps") {
    ChainWitness w = minimal_chain(c, 0.1, 0.9);
    REQUIRE(w.chain.size() == 2);
    Word g = slide(r, w);
    CHECK(syllable_length(g) == 2);
    CHECK(g.letters().size() == 2);
    CHECK(g.letters()[1].gen == 'a');
    CHECK(g.letters()[0].gen == 'b');
    double gx = r.act(g, 0.1);
    CHECK(gx > 0.9);
    CHECK(covering_distance(c, 0.1, gx).value == 2);
  }
  SUBCASE("budget") {
    ChainWitness w = minimal_chain(c, 0.1, 0.9);
    CHECK_THROWS_AS(slide(r, w, 1), BudgetError);
  }
}

TEST_CASE("covering distance never exceeds syllable length") {
  Representation r = two_bumps();
  Cover c = Cover::from_representation(r);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> g(0, 1), e(-4, 4);
  std::uniform_real_distribution<double> U(0.01, 0.99);
  for (int t = 0; t < 500; ++t) {
    std::vector<Letter> ls;
    for (int i = 0; i < 1 + t % 6; ++i) {
      int n = e(rng);
      if (n != 0) ls.push_back({g(rng) ? 'a' : 'b', n});
    }
    Word w(ls);
    double x = U(rng);
    CHECK(covering_distance(c, x, r.act(w, x)).value <= syllable_length(w));
  }
}
