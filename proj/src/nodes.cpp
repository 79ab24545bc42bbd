#include "critreg/nodes.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <stdexcept>

#include "critreg/bump.hpp"

namespace crg {

namespace {

constexpr double kThird = 1.0 / 3.0;
constexpr double kTwoThirds = 2.0 / 3.0;

class PsiFunctionNode : public Node {
 public:
  std::string kind() const override { return "psi"; }
  double eval(double x) const override { return bump::psi(x); }
  Jet eval_jet(const Jet& x) const override { return bump::psi_jet(x); }
  double inverse_eval(double) const override { throw CapabilityError("psi is not invertible"); }
  IntervalSet support() const override { return {{-1.0, 1.0}}; }
  bool is_homeo() const override { return false; }
  json to_json() const override { return json{{"kind", "psi"}}; }
};

class PsiBumpNode : public Node {
 public:
  PsiBumpNode(double lo, double hi, double h) : lo_(lo), hi_(hi), h_(h) {}
  std::string kind() const override { return "psi-bump"; }
  double eval(double x) const override {
    if (!(lo_ < x && x < hi_)) return x;
    return x + h_ * bump::psi((2.0 * x - lo_ - hi_) / (hi_ - lo_));
  }
  Jet eval_jet(const Jet& x) const override {
    if (!(lo_ < x.c[0] && x.c[0] < hi_)) return x;
    Jet u = (2.0 * x - (lo_ + hi_)) * (1.0 / (hi_ - lo_));
    return x + h_ * bump::psi_jet(u);
  }
  IntervalSet support() const override { return {{lo_, hi_}}; }
  json to_json() const override { return json{{"kind", "psi-bump"}, {"lo", lo_}, {"hi", hi_}, {"height", h_}}; }

 private:
  double lo_, hi_, h_;
};

class PlateauNode : public Node {
 public:
  PlateauNode(double lo, double ell, double H, double D, bool diffeo)
      : lo_(lo), ell_(ell), H_(H), D_(D), diffeo_(diffeo) {}
  std::string kind() const override { return diffeo_ ? "plateau-bump" : "plateau"; }
  double g(double x) const {
    double t = x - lo_;
    if (!(0.0 < t && t < ell_)) return 0.0;
    double s = t <= 0.5 * ell_ ? t : ell_ - t;
    return H_ * bump::S(2.0 * s / (D_ * ell_) - 1.0);
  }
  double eval(double x) const override { return diffeo_ ? x + g(x) : g(x); }
  // On the plateau every step adds exactly H, so runs of plateau steps are taken at once.
  double iterate(double x, long n) const override {
    if (!diffeo_) return Node::iterate(x, n);
    double a = lo_ + D_ * ell_, b = lo_ + (1.0 - D_) * ell_;
    while (n > 0) {
      if (H_ > 0.0 && x >= a && x + H_ <= b) {
        long k = std::min<long>(n, static_cast<long>(std::floor((b - x) / H_)));
        if (k >= 1) {
          x += static_cast<double>(k) * H_;
          n -= k;
          continue;
        }
      }
      double y = x + g(x);
      if (y == x) break;
      x = y;
      --n;
    }
    return x;
  }
  double iterate_inverse(double x, long n) const override {
    if (!diffeo_) throw CapabilityError("plateau function is not invertible");
    double a = lo_ + D_ * ell_, b = lo_ + (1.0 - D_) * ell_;
    while (n > 0) {
      if (H_ > 0.0 && x - H_ >= a && x <= b) {
        long k = std::min<long>(n, static_cast<long>(std::floor((x - a) / H_)));
        if (k >= 1) {
          x -= static_cast<double>(k) * H_;
          n -= k;
          continue;
        }
      }
      double y = inverse_eval(x);
      if (y == x) break;
      x = y;
      --n;
    }
    return x;
  }
  Jet eval_jet(const Jet& x) const override {
    double t = x.c[0] - lo_;
    Jet gj = Jet::constant(0.0, x.n);
    if (0.0 < t && t < ell_) {
      Jet s = t <= 0.5 * ell_ ? x - lo_ : (lo_ + ell_) - x;
      gj = H_ * bump::S_jet(s * (2.0 / (D_ * ell_)) - 1.0);
    }
    return diffeo_ ? x + gj : gj;
  }
  double inverse_eval(double y) const override {
    if (!diffeo_) throw CapabilityError("plateau function is not invertible");
    return numeric_inverse(*this, y, {lo_, lo_ + ell_});
  }
  IntervalSet support() const override { return {{lo_, lo_ + ell_}}; }
  bool is_homeo() const override { return diffeo_; }
  json to_json() const override {
    return json{{"kind", kind()}, {"lo", lo_}, {"ell", ell_}, {"height", H_}, {"D", D_}};
  }

 private:
  double lo_, ell_, H_, D_;
  bool diffeo_;
};

class PolynomialNode : public Node {
 public:
  PolynomialNode(std::vector<double> c, double lo, double hi) : c_(std::move(c)), lo_(lo), hi_(hi) {}
  std::string kind() const override { return "polynomial"; }
  double eval(double x) const override {
    double r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }
  Jet eval_jet(const Jet& x) const override {
    Jet r = Jet::constant(0.0, x.n);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }
  double inverse_eval(double y) const override { return numeric_inverse(*this, y, {lo_, hi_}); }
  IntervalSet support() const override {
    MapObject self(std::make_shared<PolynomialNode>(c_, lo_, hi_));
    return numeric_support(self, {lo_, hi_}, 4096);
  }
  bool support_structural() const override { return false; }
  Interval hull() const override { return {lo_, hi_}; }
  Interval domain() const override { return {lo_, hi_}; }
  json to_json() const override { return json{{"kind", "polynomial"}, {"coeffs", c_}, {"lo", lo_}, {"hi", hi_}}; }

 private:
  std::vector<double> c_;
  double lo_, hi_;
};

// smooth step, 0 on [0,1/3], 1 on [2/3,1]
Jet beta(const Jet& x) { return bump::S_jet(6.0 * x - 3.0); }

Jet chart_jet(const Jet& x) {
  double v = x.c[0];
  if (v <= 0.0 || v >= 1.0) return x;
  if (v <= kThird) return exp(-1.0 / x);
  if (v >= kTwoThirds) return 1.0 - exp(-1.0 / (1.0 - x));
  Jet b = beta(x);
  return (1.0 - b) * exp(-1.0 / x) + b * (1.0 - exp(-1.0 / (1.0 - x)));
}

Jet chart_inverse_jet(const Jet& y) {
  double v = y.c[0];
  if (v <= 0.0 || v >= 1.0) return y;
  if (v <= std::exp(-3.0)) return -1.0 / log(y);
  if (v >= 1.0 - std::exp(-3.0)) return 1.0 + 1.0 / log(1.0 - y);
  double x0 = flat_chart_inverse(v);
  if (y.n == 0) return Jet::constant(x0, 0);
  Jet fx = chart_jet(Jet::variable(x0, y.n));
  return invert_series(fx.c, y.n, x0, y);
}

// Phi(g)(x) for x <= 1/3 from the Taylor germ a_1..a_n of g at 0 (a_m first nonzero).
// With L = exp(1/x), phi^2(x) = exp(-L) and the result is x / (1 + x r),
// r = log m + log1p(-log(sum_j a_j Y^{j-m}) / (m L)).
Jet near_zero(const Jet& x, const std::array<double, kMaxJet + 1>& a, int n) {
  int m = 1;
  while (m <= n && a[m] == 0.0) ++m;
  if (m > n) throw std::domain_error("compactify: g has a flat germ at an endpoint");
  if (a[m] <= 0.0) throw std::domain_error("compactify: g is not increasing at an endpoint");
  Jet invx = 1.0 / x;
  Jet r = Jet::constant(std::log(static_cast<double>(m)), x.n);
  if (invx.c[0] < 700.0) {
    Jet L = exp(invx);
    Jet Y = exp(-L);
    Jet s = Jet::constant(0.0, x.n);
    for (int j = n; j >= m; --j) s = s * Y + a[j];
    Jet c = log(s);
    r = r + log1p(-c / (static_cast<double>(m) * L));
  }
  return x / (1.0 + x * r);
}

class CompactifyNode : public Node {
 public:
  explicit CompactifyNode(MapObject g) : g_(std::move(g)) {
    order_ = std::min(g_.max_order(), kMaxJet);
    Jet j0 = g_.jet(0.0, order_);
    Jet j1 = g_.jet(1.0, order_);
    for (int j = 1; j <= order_; ++j) {
      a0_[j] = j0.c[j];
      a1_[j] = (j % 2 == 1 ? 1.0 : -1.0) * j1.c[j];
    }
  }
  std::string kind() const override { return "compactify"; }
  double eval(double x) const override { return eval_jet(Jet::constant(x, 0)).c[0]; }
  Jet eval_jet(const Jet& x) const override {
    double v = x.c[0];
    if (v <= 0.0 || v >= 1.0) return x;
    if (v <= kThird) return near_zero(x, a0_, order_);
    if (v >= kTwoThirds) return 1.0 - near_zero(1.0 - x, a1_, order_);
    Jet y = chart_jet(chart_jet(x));
    y = g_.node()->eval_jet(y);
    return chart_inverse_jet(chart_inverse_jet(y));
  }
  double inverse_eval(double y) const override { return compactify_map(g_.inverse()).eval(y); }
  IntervalSet support() const override {
    IntervalSet s;
    for (auto& c : g_.support())
      s.push_back({flat_chart_inverse(flat_chart_inverse(std::max(c.lo, 0.0))),
                   flat_chart_inverse(flat_chart_inverse(std::min(c.hi, 1.0)))});
    return s;
  }
  bool support_structural() const override { return g_.support_structural(); }
  Interval hull() const override {
    auto s = support();
    if (s.empty()) return {0.0, 0.0};
    return {s.front().lo, s.back().hi};
  }
  int max_order() const override { return order_; }
  std::string regularity() const override { return g_.regularity(); }
  Interval domain() const override { return {0.0, 1.0}; }
  json to_json() const override { return json{{"kind", "compactify"}, {"child", g_.to_json()}}; }

 private:
  MapObject g_;
  int order_ = 0;
  std::array<double, kMaxJet + 1> a0_{}, a1_{};
};

}  // namespace

MapObject psi_function() { return MapObject(std::make_shared<PsiFunctionNode>()); }

MapObject psi_bump_diffeo(double lo, double hi, double h) {
  if (!(lo < hi)) throw std::invalid_argument("psi_bump_diffeo: empty interval");
  // max |Psi'| scaled by the chart slope must stay below 1
  double slope = std::fabs(h) * bump::psi_norm(1) * 2.0 / (hi - lo);
  if (slope >= 1.0) throw std::invalid_argument("psi_bump_diffeo: height too large for a diffeomorphism");
  if (h == 0.0) return identity_map();
  return MapObject(std::make_shared<PsiBumpNode>(lo, hi, h));
}

MapObject plateau_function(double lo, double ell, double H, double D) {
  if (!(ell > 0.0) || !(D > 0.0 && D < 0.5)) throw std::invalid_argument("plateau_function: bad parameters");
  return MapObject(std::make_shared<PlateauNode>(lo, ell, H, D, false));
}

MapObject plateau_diffeo(double lo, double ell, double H, double D) {
  if (!(ell > 0.0) || !(D > 0.0 && D < 0.5)) throw std::invalid_argument("plateau_diffeo: bad parameters");
  if (std::fabs(H) * 2.0 / (D * ell) >= 1.0)
    throw std::invalid_argument("plateau_diffeo: Id + g is not a diffeomorphism");
  if (H == 0.0) return identity_map();
  return MapObject(std::make_shared<PlateauNode>(lo, ell, H, D, true));
}

MapObject polynomial_map(std::vector<double> coeffs, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("polynomial_map: empty interval");
  PolynomialNode p(coeffs, lo, hi);
  double prev = p.eval(lo);
  for (int i = 1; i <= 1000; ++i) {
    double v = p.eval(lo + (hi - lo) * i / 1000.0);
    if (!(v > prev)) throw std::invalid_argument("polynomial_map: not increasing");
    prev = v;
  }
  if (p.eval(lo) != lo || p.eval(hi) != hi) throw std::invalid_argument("polynomial_map: endpoints must be fixed");
  return MapObject(std::make_shared<PolynomialNode>(std::move(coeffs), lo, hi));
}

double flat_chart(double x) { return chart_jet(Jet::constant(x, 0)).c[0]; }

double flat_chart_inverse(double y) {
  if (y <= 0.0 || y >= 1.0) return y;
  if (y <= std::exp(-3.0)) return -1.0 / std::log(y);
  if (y >= 1.0 - std::exp(-3.0)) return 1.0 + 1.0 / std::log1p(-y);
  auto f = [y](double x) { return flat_chart(x) - y; };
  boost::uintmax_t it = 200;
  auto r = boost::math::tools::toms748_solve(f, kThird, kTwoThirds, boost::math::tools::eps_tolerance<double>(52), it);
  return 0.5 * (r.first + r.second);
}

MapObject compactify_map(const MapObject& g) {
  if (std::fabs(g.eval(0.0)) > 1e-12 || std::fabs(g.eval(1.0) - 1.0) > 1e-12)
    throw std::invalid_argument("compactify: g must fix 0 and 1");
  if (g.is_identity_node()) return g;
  return MapObject(std::make_shared<CompactifyNode>(g));
}

MapObject map_from_json_ext(const json& j) {
  std::string k = j.at("kind");
  if (k == "psi") return psi_function();
  if (k == "psi-bump") return psi_bump_diffeo(j.at("lo"), j.at("hi"), j.at("height"));
  if (k == "plateau") return plateau_function(j.at("lo"), j.at("ell"), j.at("height"), j.at("D"));
  if (k == "plateau-bump") return plateau_diffeo(j.at("lo"), j.at("ell"), j.at("height"), j.at("D"));
  if (k == "polynomial")
    return polynomial_map(j.at("coeffs").get<std::vector<double>>(), j.at("lo"), j.at("hi"));
  if (k == "compactify") return compactify_map(map_from_json(j.at("child")));
  throw std::invalid_argument("unknown map kind: " + k);
}

}  // namespace crg
