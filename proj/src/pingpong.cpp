#include "critreg/pingpong.hpp"

#include <cmath>
#include <stdexcept>

namespace crg {
namespace {

constexpr double kTarget = 2.5;  // chart image of x_{2i-1} under the block element

Word syllable_word(const Syllable& s) {
  NormalForm nf;
  nf.syllables.push_back(s);
  return nf.to_word();
}

double chart_coord(double x, double lo, double hi) { return 2.0 * std::atanh((2.0 * x - lo - hi) / (hi - lo)); }

double chart_point(double z, double lo, double hi) { return lo + (std::tanh(0.5 * z) + 1.0) * 0.5 * (hi - lo); }

}  // namespace

PingPong build_pingpong(const Word& g, Interval target) {
  for (auto& l : g.letters())
    if (l.gen == 'b') throw std::invalid_argument("build_pingpong: letter b is not in (G x <s>) * <t>");
  NormalForm nf = normalize(g);
  if (nf.is_identity()) throw std::invalid_argument("build_pingpong: element is trivial");

  // cyclic rotation into the form t^p A ... t^p A
  Word conj;
  for (int guard = 0; guard < 8; ++guard) {
    auto& s = nf.syllables;
    if (s.size() == 1) break;
    if (!s.front().in_a && s.back().in_a) break;
    Word x = syllable_word(s.front());
    conj = conj * x;
    nf = normalize(x.inverse() * nf.to_word() * x);
  }
  PingPong pp;
  pp.element = nf.to_word();
  pp.conjugator = conj;

  // pairs (p_i, A_i), i = 1..l from the right
  struct Pair {
    long p = 0;
    Syllable a;
    bool trivial_a = true;
  };
  std::vector<Pair> pairs;
  auto& s = nf.syllables;
  if (s.size() == 1) {
    Pair pr;
    if (s[0].in_a) {
      pr.a = s[0];
      pr.trivial_a = false;
    } else {
      pr.p = s[0].free.front().exp;
    }
    pairs.push_back(pr);
  } else {
    if (s.front().in_a || !s.back().in_a || s.size() % 2 != 0)
      throw std::invalid_argument("build_pingpong: word has no alternating form");
    for (std::size_t j = s.size(); j >= 2; j -= 2) {
      Pair pr;
      pr.a = s[j - 1];
      pr.trivial_a = false;
      pr.p = s[j - 2].free.front().exp;
      pairs.push_back(pr);
    }
  }
  const std::size_t l = pairs.size();
  pp.blocks = l;

  // raw coordinates
  std::vector<double> x(2 * l + 1), z(l + 1);
  for (std::size_t i = 1; i <= l; ++i) {
    double lo = 2.0 * i - 1.0, hi = 2.0 * i;
    x[2 * i - 2] = 2.0 * i - 0.5;
    z[i - 1] = 2.0 * i - 0.25;
    x[2 * i - 1] = pairs[i - 1].trivial_a ? x[2 * i - 2] : chart_point(kTarget, lo, hi);
  }
  x[2 * l] = 2.0 * l + 1.5;
  z[l] = 2.0 * l + 1.75;
  if (pairs[0].trivial_a) z[0] = 1.0;
  double raw_hi = pairs.back().p == 0 ? 2.0 * l : z[l];

  double T_lo = 1.0, T_scale = 1.0;
  if (target.lo < target.hi) {
    T_scale = target.length() / (raw_hi - 1.0);
    T_lo = target.lo;
  }
  auto T = [&](double r) { return target.lo < target.hi ? T_lo + (r - 1.0) * T_scale : r; };

  std::vector<MapObject> fa, fc, fd, fe;
  for (std::size_t i = 1; i <= l; ++i) {
    const auto& pr = pairs[i - 1];
    double lo = T(2.0 * i - 1.0), hi = T(2.0 * i);
    if (!pr.trivial_a) {
      const auto& bs = pr.a.bs;
      if (!bs.is_identity()) {
        double w = 1.0, c0 = 0.0;
        if (bs.m == 0) {
          w = kTarget / bs.q.to_double();
        } else {
          c0 = (kTarget - bs.q.to_double()) / (1.0 - std::ldexp(1.0, static_cast<int>(bs.m)));
        }
        fa.push_back(affine_chart(lo, hi, 2.0, -c0));
        fe.push_back(affine_chart(lo, hi, 1.0, w));
      } else {
        fc.push_back(affine_chart(lo, hi, 1.0, kTarget / static_cast<double>(pr.a.cexp)));
      }
    }
    if (pr.p != 0) {
      double zl = T(z[i - 1]), zh = T(z[i]);
      double tau = (chart_coord(T(x[2 * i]), zl, zh) - chart_coord(T(x[2 * i - 1]), zl, zh)) / static_cast<double>(pr.p);
      fd.push_back(affine_chart(zl, zh, 1.0, tau));
    }
  }
  for (auto& v : x) v = T(v);
  for (auto& v : z) v = T(v);
  pp.x = x;
  pp.z = z;
  pp.support = {T(1.0), T(raw_hi)};
  Interval amb = pp.support;
  pp.rep = Representation({disjoint_product(fa), identity_map(), disjoint_product(fc), disjoint_product(fd),
                           disjoint_product(fe)},
                          amb, "pingpong");
  return pp;
}

}  // namespace crg
