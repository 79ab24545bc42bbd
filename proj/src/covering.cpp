#include "critreg/covering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crg {

namespace {

double guard(double p) { return 1e-12 * (1.0 + std::fabs(p)); }

bool inside(const Interval& iv, double p) { return iv.lo + guard(p) < p && p < iv.hi - guard(p); }

}  // namespace

Cover::Cover(std::vector<CoverInterval> items, Interval horizon) : horizon_(horizon) {
  std::sort(items.begin(), items.end(), [](const CoverInterval& a, const CoverInterval& b) {
    if (a.iv.lo != b.iv.lo) return a.iv.lo < b.iv.lo;
    return a.iv.hi < b.iv.hi;
  });
  for (auto& it : items) {
    if (!(it.iv.hi > it.iv.lo)) continue;
    if (!items_.empty() && items_.back().iv == it.iv) continue;
    items_.push_back(it);
  }
}

Cover Cover::from_representation(const Representation& r, Interval horizon) {
  std::vector<CoverInterval> items;
  for (char g = 'a'; g <= 'e'; ++g) {
    auto s = r.gen(g).support();
    for (std::size_t i = 0; i < s.size(); ++i) items.push_back({s[i], g, static_cast<int>(i)});
  }
  return Cover(std::move(items), horizon);
}

int Cover::best_at(double p) const {
  // items are sorted by lo; only those with lo < p qualify
  auto end = std::upper_bound(items_.begin(), items_.end(), p,
                              [](double v, const CoverInterval& c) { return v < c.iv.lo; });
  int best = -1;
  double hi = -kInf;
  for (auto it = items_.begin(); it != end; ++it)
    if (inside(it->iv, p) && it->iv.hi > hi) {
      hi = it->iv.hi;
      best = static_cast<int>(it - items_.begin());
    }
  return best;
}

std::string CoverResult::str() const {
  if (infinite) return "inf";
  std::ostringstream os;
  if (lower_bound) os << ">=";
  os << value;
  return os.str();
}

CoverResult covering_length(const Cover& c, const IntervalSet& segments) {
  IntervalSet segs = segments;
  std::sort(segs.begin(), segs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  CoverResult r;
  double covered = -kInf;  // everything below this (exclusive) is covered
  for (auto& s : segs) {
    if (s.lo > s.hi) continue;
    double p = std::max(s.lo, covered);
    bool first = true;
    while (first || p <= s.hi) {
      first = false;
      if (p < covered) break;
      if (!(c.horizon().lo < p && p < c.horizon().hi)) {
        r.lower_bound = true;
        return r;
      }
      int k = c.best_at(p);
      if (k < 0) {
        r.infinite = true;
        return r;
      }
      ++r.value;
      covered = c.items()[k].iv.hi;
      p = covered;
    }
  }
  return r;
}

CoverResult covering_length(const Cover& c, double x, double y) {
  if (x > y) std::swap(x, y);
  return covering_length(c, IntervalSet{{x, y}});
}

CoverResult covering_distance(const Cover& c, double x, double y) {
  if (x == y) return {};
  return covering_length(c, x, y);
}

json ChainWitness::to_json() const {
  json a = json::array();
  for (auto& u : chain)
    a.push_back(json{{"generator", std::string(1, u.gen)}, {"component", u.index}, {"lo", u.iv.lo}, {"hi", u.iv.hi}});
  return json{{"x", x}, {"y", y}, {"chain", a}};
}

ChainWitness minimal_chain(const Cover& c, double x, double y) {
  if (x > y) std::swap(x, y);
  ChainWitness w;
  w.x = x;
  w.y = y;
  double p = x;
  do {
    if (!(c.horizon().lo < p && p < c.horizon().hi)) throw NoCoverError("minimal_chain: horizon reached");
    int k = c.best_at(p);
    if (k < 0) throw NoCoverError("minimal_chain: gap in the cover");
    w.chain.push_back(c.items()[k]);
    p = c.items()[k].iv.hi;
  } while (p <= y);
  return w;
}

bool is_chain(const std::vector<Interval>& ivs) {
  for (std::size_t i = 0; i + 1 < ivs.size(); ++i) {
    const auto& u = ivs[i];
    const auto& v = ivs[i + 1];
    if (!(u.lo < v.lo && v.lo < u.hi && u.hi < v.hi)) return false;
  }
  for (std::size_t i = 0; i + 2 < ivs.size(); ++i)
    for (std::size_t j = i + 2; j < ivs.size(); ++j)
      if (ivs[i].hi > ivs[j].lo) return false;
  return true;
}

Word slide(const Representation& r, const ChainWitness& w, long budget) {
  if (w.chain.empty()) throw std::invalid_argument("slide: empty chain");
  double p = w.x;
  if (!inside(w.chain.front().iv, p)) throw std::invalid_argument("slide: x not in the first chain member");
  Word g;
  for (std::size_t i = 0; i < w.chain.size(); ++i) {
    const auto& u = w.chain[i];
    bool last = i + 1 == w.chain.size();
    double target = last ? w.y : w.chain[i + 1].iv.lo + guard(w.chain[i + 1].iv.lo);
    const MapObject& f = r.gen(u.gen);
    bool forward = f.eval(p) > p;
    const MapObject& step = forward ? f : r.gen_inverse(u.gen);
    long n = 0;
    do {
      double q = step.eval(p);
      if (q <= p) throw BudgetError("slide: orbit stalled in chain member");
      p = q;
      if (++n > budget) throw BudgetError("slide: exponent search exceeded the budget");
    } while (p <= target);
    g = Word::gen(u.gen, forward ? n : -n) * g;
  }
  return g;
}

}  // namespace crg
