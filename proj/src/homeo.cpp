#include "critreg/homeo.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <stdexcept>

#include "critreg/bump.hpp"

namespace crg {

// ------------------------------------------------------------------ helpers

IntervalSet merge_sets(IntervalSet a, const IntervalSet& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  return a;
}

bool sets_disjoint(const IntervalSet& a, const IntervalSet& b) {
  for (auto& x : a)
    for (auto& y : b)
      if (x.lo < y.hi && y.lo < x.hi) return false;
  return true;
}

static Interval hull_of(const IntervalSet& s) {
  if (s.empty()) return {0.0, 0.0};
  double lo = s.front().lo, hi = s.front().hi;
  for (auto& i : s) {
    lo = std::min(lo, i.lo);
    hi = std::max(hi, i.hi);
  }
  return {lo, hi};
}

static Interval hull_union(Interval a, Interval b) {
  if (a.hi <= a.lo) return b;
  if (b.hi <= b.lo) return a;
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval Node::hull() const { return hull_of(support()); }

double numeric_inverse(const Node& n, double y, Interval br) {
  if (!(br.lo < y && y < br.hi)) return y;
  auto f = [&](double x) { return n.eval(x) - y; };
  double a = br.lo, b = br.hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa > 0.0 || fb < 0.0) throw std::domain_error("inverse_eval: value outside range");
  boost::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
  double x = 0.5 * (r.first + r.second);
  return x;
}

double Node::inverse_eval(double y) const { return numeric_inverse(*this, y, hull()); }

double Node::iterate(double x, long n) const {
  for (long i = 0; i < n; ++i) {
    double y = eval(x);
    if (y == x) break;
    x = y;
  }
  return x;
}

double Node::iterate_inverse(double x, long n) const {
  for (long i = 0; i < n; ++i) {
    double y = inverse_eval(x);
    if (y == x) break;
    x = y;
  }
  return x;
}

static std::string combine_regularity(const std::string& a, const std::string& b) {
  if (a == "pl" || b == "pl") return "pl";
  if (a == "smooth-interior" || b == "smooth-interior") return "smooth-interior";
  return "smooth";
}

static json dbl(double v) {
  if (std::isfinite(v)) return json(v);
  return json(v > 0 ? "inf" : "-inf");
}

// ------------------------------------------------------------------ nodes

namespace {

class IdentityNode : public Node {
 public:
  std::string kind() const override { return "identity"; }
  double eval(double x) const override { return x; }
  Jet eval_jet(const Jet& x) const override { return x; }
  double inverse_eval(double y) const override { return y; }
  IntervalSet support() const override { return {}; }
  Interval hull() const override { return {0.0, 0.0}; }
  json to_json() const override { return json{{"kind", "identity"}}; }
};

class PLNode : public Node {
 public:
  explicit PLNode(PLMap f) : f_(std::move(f)) {
    if (!f_.is_identity()) {
      lo_ = f_.points().front().first.to_double();
      hi_ = f_.points().back().first.to_double();
    }
  }
  std::string kind() const override { return "pl"; }
  double eval(double x) const override {
    if (!(lo_ < x && x < hi_)) return x;
    return f_.eval(x);
  }
  Jet eval_jet(const Jet& x) const override {
    Jet r = Jet::constant(eval(x.c[0]), x.n);
    if (x.n >= 1) {
      double s = f_.slope(Dyadic::from_double(x.c[0])).to_double();
      for (int i = 1; i <= x.n; ++i) r.c[i] = s * x.c[i];
    }
    return r;
  }
  double inverse_eval(double y) const override {
    if (!(lo_ < y && y < hi_)) return y;
    return f_.inverse_eval(y);
  }
  IntervalSet support() const override {
    IntervalSet s;
    for (auto& q : f_.support()) s.push_back({q.lo.get_d(), q.hi.get_d()});
    return s;
  }
  Interval hull() const override { return {lo_, hi_}; }
  int max_order() const override { return 1; }
  std::string regularity() const override { return "pl"; }
  json to_json() const override {
    json pts = json::array();
    for (auto& [x, y] : f_.points()) pts.push_back({x.str(), y.str()});
    return json{{"kind", "pl"}, {"breakpoints", pts}};
  }
  const PLMap& map() const { return f_; }

 private:
  PLMap f_;
  double lo_ = 0.0, hi_ = 0.0;
};

class TranslationNode : public Node {
 public:
  explicit TranslationNode(double t) : t_(t) {}
  std::string kind() const override { return "translation"; }
  double eval(double x) const override { return x + t_; }
  Jet eval_jet(const Jet& x) const override { return x + t_; }
  double inverse_eval(double y) const override { return y - t_; }
  IntervalSet support() const override {
    if (t_ == 0.0) return {};
    return {{-kInf, kInf}};
  }
  Interval hull() const override { return t_ == 0.0 ? Interval{0.0, 0.0} : Interval{-kInf, kInf}; }
  json to_json() const override { return json{{"kind", "translation"}, {"tau", t_}}; }
  double tau() const { return t_; }

 private:
  double t_;
};

class CircleLiftNode : public Node {
 public:
  explicit CircleLiftNode(std::vector<std::pair<double, double>> pts) : pts_(std::move(pts)) {
    if (pts_.size() < 2) throw std::invalid_argument("circle lift needs breakpoints");
    if (std::fabs(pts_.back().first - pts_.front().first - 1.0) > 1e-15 ||
        std::fabs(pts_.back().second - pts_.front().second - 1.0) > 1e-15)
      throw std::invalid_argument("circle lift must span one period");
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
      if (!(pts_[i + 1].first > pts_[i].first && pts_[i + 1].second > pts_[i].second))
        throw std::invalid_argument("circle lift must be increasing");
  }
  std::string kind() const override { return "circle-lift"; }
  double eval(double x) const override {
    double x0 = pts_.front().first;
    double k = std::floor(x - x0);
    double r = x - k;
    auto it = std::upper_bound(pts_.begin(), pts_.end(), r,
                               [](double v, const std::pair<double, double>& p) { return v < p.first; });
    if (it == pts_.end()) it = pts_.end() - 1;
    if (it == pts_.begin()) it = pts_.begin() + 1;
    auto& a = *(it - 1);
    auto& b = *it;
    return a.second + (r - a.first) * (b.second - a.second) / (b.first - a.first) + k;
  }
  Jet eval_jet(const Jet& x) const override {
    Jet r = Jet::constant(eval(x.c[0]), x.n);
    double h = 1e-9;
    if (x.n >= 1) {
      double s = (eval(x.c[0] + h) - eval(x.c[0])) / h;
      for (int i = 1; i <= x.n; ++i) r.c[i] = s * x.c[i];
    }
    return r;
  }
  double inverse_eval(double y) const override {
    std::vector<std::pair<double, double>> inv;
    for (auto& [a, b] : pts_) inv.emplace_back(b, a);
    return CircleLiftNode(inv).eval(y);
  }
  IntervalSet support() const override { return {{-kInf, kInf}}; }
  bool support_structural() const override { return false; }
  int max_order() const override { return 1; }
  std::string regularity() const override { return "pl"; }
  json to_json() const override {
    json p = json::array();
    for (auto& [a, b] : pts_) p.push_back({a, b});
    return json{{"kind", "circle-lift"}, {"breakpoints", p}};
  }
  std::vector<std::pair<double, double>> inverted() const {
    std::vector<std::pair<double, double>> inv;
    for (auto& [a, b] : pts_) inv.emplace_back(b, a);
    return inv;
  }

 private:
  std::vector<std::pair<double, double>> pts_;
};

class AffineChartNode : public Node {
 public:
  AffineChartNode(double lo, double hi, double s, double t) : lo_(lo), hi_(hi), s_(s), t_(t) {
    if (!(lo < hi) || !(s > 0)) throw std::invalid_argument("affine chart needs lo<hi and s>0");
  }
  std::string kind() const override { return "affine-chart"; }
  double eval(double x) const override {
    if (!(lo_ < x && x < hi_)) return x;
    double u = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
    double z = 2.0 * std::atanh(u);
    double z2 = s_ * z + t_;
    double y = lo_ + (hi_ - lo_) * 0.5 * (1.0 + std::tanh(0.5 * z2));
    return std::clamp(y, lo_, hi_);
  }
  Jet eval_jet(const Jet& x) const override {
    if (!(lo_ < x.c[0] && x.c[0] < hi_)) return x;
    Jet u = (2.0 * x - (lo_ + hi_)) * (1.0 / (hi_ - lo_));
    Jet z = 2.0 * atanh(u);
    Jet z2 = s_ * z + t_;
    Jet y = (tanh(0.5 * z2) + 1.0) * ((hi_ - lo_) * 0.5) + lo_;
    return y;
  }
  double inverse_eval(double y) const override { return AffineChartNode(lo_, hi_, 1.0 / s_, -t_ / s_).eval(y); }
  IntervalSet support() const override {
    if (s_ == 1.0 && t_ == 0.0) return {};
    if (s_ == 1.0) return {{lo_, hi_}};
    double zs = t_ / (1.0 - s_);
    double xs = lo_ + (hi_ - lo_) * 0.5 * (1.0 + std::tanh(0.5 * zs));
    if (!(lo_ < xs && xs < hi_)) return {{lo_, hi_}};
    return {{lo_, xs}, {xs, hi_}};
  }
  Interval hull() const override {
    if (s_ == 1.0 && t_ == 0.0) return {0.0, 0.0};
    return {lo_, hi_};
  }
  std::string regularity() const override { return "smooth-interior"; }
  json to_json() const override {
    return json{{"kind", "affine-chart"}, {"lo", lo_}, {"hi", hi_}, {"scale", s_}, {"shift", t_}};
  }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double s() const { return s_; }
  double t() const { return t_; }

 private:
  double lo_, hi_, s_, t_;
};

class MirrorNode : public Node {
 public:
  explicit MirrorNode(MapObject f) : f_(std::move(f)) {}
  std::string kind() const override { return "mirror"; }
  double eval(double x) const override { return -f_.eval(-x); }
  Jet eval_jet(const Jet& x) const override { return -f_.node()->eval_jet(-x); }
  double inverse_eval(double y) const override { return -f_.inverse_eval(-y); }
  double iterate(double x, long n) const override { return -f_.node()->iterate(-x, n); }
  double iterate_inverse(double x, long n) const override { return -f_.node()->iterate_inverse(-x, n); }
  IntervalSet support() const override {
    IntervalSet s;
    auto c = f_.support();
    for (auto it = c.rbegin(); it != c.rend(); ++it) s.push_back({-it->hi, -it->lo});
    return s;
  }
  bool support_structural() const override { return f_.support_structural(); }
  Interval hull() const override {
    Interval h = f_.hull();
    if (h.hi <= h.lo) return h;
    return {-h.hi, -h.lo};
  }
  int max_order() const override { return f_.max_order(); }
  std::string regularity() const override { return f_.regularity(); }
  bool is_homeo() const override { return f_.node()->is_homeo(); }
  json to_json() const override { return json{{"kind", "mirror"}, {"child", f_.to_json()}}; }
  const MapObject& child() const { return f_; }

 private:
  MapObject f_;
};

class ComposeNode : public Node {
 public:
  ComposeNode(MapObject l, MapObject r) : l_(std::move(l)), r_(std::move(r)) {
    auto a = l_.support(), b = r_.support();
    disjoint_ = l_.support_structural() && r_.support_structural() && sets_disjoint(a, b);
    hull_ = hull_union(l_.hull(), r_.hull());
    if (disjoint_) supp_ = merge_sets(a, b);
  }
  std::string kind() const override { return "compose"; }
  double eval(double x) const override { return l_.eval(r_.eval(x)); }
  Jet eval_jet(const Jet& x) const override { return l_.node()->eval_jet(r_.node()->eval_jet(x)); }
  double inverse_eval(double y) const override { return r_.inverse_eval(l_.inverse_eval(y)); }
  IntervalSet support() const override {
    if (disjoint_) return supp_;
    if (!(hull_.hi > hull_.lo)) return {};
    if (!std::isfinite(hull_.lo) || !std::isfinite(hull_.hi)) return {{-kInf, kInf}};
    MapObject self(std::make_shared<ComposeNode>(l_, r_));
    return numeric_support(self, hull_, 4096);
  }
  bool support_structural() const override { return disjoint_; }
  Interval hull() const override { return hull_; }
  int max_order() const override { return std::min(l_.max_order(), r_.max_order()); }
  std::string regularity() const override { return combine_regularity(l_.regularity(), r_.regularity()); }
  json to_json() const override { return json{{"kind", "compose"}, {"left", l_.to_json()}, {"right", r_.to_json()}}; }
  const MapObject& left() const { return l_; }
  const MapObject& right() const { return r_; }

 private:
  MapObject l_, r_;
  bool disjoint_ = false;
  IntervalSet supp_;
  Interval hull_;
};

class InverseNode : public Node {
 public:
  explicit InverseNode(MapObject f) : f_(std::move(f)) {}
  std::string kind() const override { return "inverse"; }
  double eval(double y) const override { return f_.inverse_eval(y); }
  Jet eval_jet(const Jet& y) const override {
    double x0 = f_.inverse_eval(y.c[0]);
    Jet fx = f_.node()->eval_jet(Jet::variable(x0, y.n));
    return invert_series(fx.c, y.n, x0, y);
  }
  double inverse_eval(double x) const override { return f_.eval(x); }
  double iterate(double x, long n) const override { return f_.node()->iterate_inverse(x, n); }
  double iterate_inverse(double x, long n) const override { return f_.node()->iterate(x, n); }
  IntervalSet support() const override { return f_.support(); }
  bool support_structural() const override { return f_.support_structural(); }
  Interval hull() const override { return f_.hull(); }
  int max_order() const override { return f_.max_order(); }
  std::string regularity() const override { return f_.regularity(); }
  json to_json() const override { return json{{"kind", "inverse"}, {"child", f_.to_json()}}; }
  const MapObject& child() const { return f_; }

 private:
  MapObject f_;
};

class PowerNode : public Node {
 public:
  PowerNode(MapObject f, long n) : f_(std::move(f)), n_(n), hull_(f_.hull()) {
    if (n < 1) throw std::invalid_argument("power node needs N >= 1");
  }
  std::string kind() const override { return "power"; }
  double eval(double x) const override {
    if (!(hull_.lo < x && x < hull_.hi)) return x;
    return f_.node()->iterate(x, n_);
  }
  Jet eval_jet(const Jet& x) const override {
    Jet y = x;
    for (long i = 0; i < n_; ++i) y = f_.node()->eval_jet(y);
    return y;
  }
  double inverse_eval(double y) const override {
    if (!(hull_.lo < y && y < hull_.hi)) return y;
    for (long i = 0; i < n_; ++i) {
      double x = f_.inverse_eval(y);
      if (x == y) break;
      y = x;
    }
    return y;
  }
  IntervalSet support() const override { return f_.support(); }
  bool support_structural() const override { return f_.support_structural(); }
  Interval hull() const override { return hull_; }
  int max_order() const override { return f_.max_order(); }
  std::string regularity() const override { return f_.regularity(); }
  json to_json() const override { return json{{"kind", "power"}, {"n", n_}, {"child", f_.to_json()}}; }
  const MapObject& child() const { return f_; }
  long n() const { return n_; }

 private:
  MapObject f_;
  long n_;
  Interval hull_;
};

class DisjointProductNode : public Node {
 public:
  explicit DisjointProductNode(std::vector<MapObject> fs) {
    for (auto& f : fs) {
      Interval h = f.hull();
      if (h.hi > h.lo) fs_.push_back(std::move(f));
    }
    std::sort(fs_.begin(), fs_.end(), [](const MapObject& a, const MapObject& b) { return a.hull().lo < b.hull().lo; });
    for (auto& f : fs_) hulls_.push_back(f.hull());
    for (std::size_t i = 0; i + 1 < hulls_.size(); ++i)
      if (hulls_[i].hi > hulls_[i + 1].lo) throw std::invalid_argument("disjoint product: overlapping factor hulls");
  }
  std::string kind() const override { return "disjoint-product"; }
  const MapObject* find(double x) const {
    auto it = std::upper_bound(hulls_.begin(), hulls_.end(), x, [](double v, const Interval& h) { return v < h.lo; });
    if (it == hulls_.begin()) return nullptr;
    --it;
    if (!(it->lo < x && x < it->hi)) return nullptr;
    return &fs_[it - hulls_.begin()];
  }
  double eval(double x) const override {
    const MapObject* f = find(x);
    return f ? f->eval(x) : x;
  }
  Jet eval_jet(const Jet& x) const override {
    const MapObject* f = find(x.c[0]);
    return f ? f->node()->eval_jet(x) : x;
  }
  double inverse_eval(double y) const override {
    const MapObject* f = find(y);
    return f ? f->inverse_eval(y) : y;
  }
  double iterate(double x, long n) const override {
    const MapObject* f = find(x);
    return f ? f->node()->iterate(x, n) : x;
  }
  double iterate_inverse(double x, long n) const override {
    const MapObject* f = find(x);
    return f ? f->node()->iterate_inverse(x, n) : x;
  }
  IntervalSet support() const override {
    IntervalSet s;
    for (auto& f : fs_) {
      auto c = f.support();
      s.insert(s.end(), c.begin(), c.end());
    }
    return s;
  }
  bool support_structural() const override {
    for (auto& f : fs_)
      if (!f.support_structural()) return false;
    return true;
  }
  Interval hull() const override {
    if (hulls_.empty()) return {0.0, 0.0};
    return {hulls_.front().lo, hulls_.back().hi};
  }
  int max_order() const override {
    int m = kMaxJet;
    for (auto& f : fs_) m = std::min(m, f.max_order());
    return m;
  }
  std::string regularity() const override {
    std::string r = "smooth";
    for (auto& f : fs_) r = combine_regularity(r, f.regularity());
    return r;
  }
  json to_json() const override {
    json c = json::array();
    for (auto& f : fs_) c.push_back(f.to_json());
    return json{{"kind", "disjoint-product"}, {"factors", c}};
  }
  const std::vector<MapObject>& factors() const { return fs_; }

 private:
  std::vector<MapObject> fs_;
  std::vector<Interval> hulls_;
};

}  // namespace

// ------------------------------------------------------------------ MapObject

MapObject::MapObject() : node_(std::make_shared<IdentityNode>()) {}

double MapObject::eval(double x) const {
  Interval d = node_->domain();
  if (x < d.lo || x > d.hi || std::isnan(x)) throw std::domain_error("eval: x outside domain");
  return node_->eval(x);
}

Jet MapObject::jet(double x, int order) const {
  if (order > node_->max_order()) throw CapabilityError("derivative order exceeds regularity of " + kind());
  Interval d = node_->domain();
  if (x < d.lo || x > d.hi) throw std::domain_error("jet: x outside domain");
  return node_->eval_jet(Jet::variable(x, order));
}

double MapObject::derivative(double x, int order) const {
  if (order == 0) return eval(x);
  return jet(x, order).derivative(order);
}

double MapObject::inverse_eval(double y) const {
  Interval d = node_->domain();
  if (y < d.lo || y > d.hi || std::isnan(y)) throw std::domain_error("inverse_eval: y outside range");
  return node_->inverse_eval(y);
}

double MapObject::iterate(double x, long n) const {
  if (n < 0) throw std::invalid_argument("iterate: negative count");
  Interval d = node_->domain();
  if (x < d.lo || x > d.hi || std::isnan(x)) throw std::domain_error("iterate: x outside domain");
  return node_->iterate(x, n);
}

bool MapObject::is_identity_node() const { return node_->kind() == "identity"; }

MapObject MapObject::inverse() const {
  const Node* n = node_.get();
  if (dynamic_cast<const IdentityNode*>(n)) return *this;
  if (auto p = dynamic_cast<const PLNode*>(n)) return pl_map(p->map().inverse());
  if (auto t = dynamic_cast<const TranslationNode*>(n)) return translation(-t->tau());
  if (auto c = dynamic_cast<const CircleLiftNode*>(n))
    return MapObject(std::make_shared<CircleLiftNode>(c->inverted()));
  if (auto a = dynamic_cast<const AffineChartNode*>(n))
    return affine_chart(a->lo(), a->hi(), 1.0 / a->s(), -a->t() / a->s());
  if (auto m = dynamic_cast<const MirrorNode*>(n)) return mirror(m->child().inverse());
  if (auto c = dynamic_cast<const ComposeNode*>(n)) return compose(c->right().inverse(), c->left().inverse());
  if (auto i = dynamic_cast<const InverseNode*>(n)) return i->child();
  if (auto p = dynamic_cast<const PowerNode*>(n)) return MapObject(std::make_shared<PowerNode>(p->child().inverse(), p->n()));
  if (auto d = dynamic_cast<const DisjointProductNode*>(n)) {
    std::vector<MapObject> inv;
    for (auto& f : d->factors()) inv.push_back(f.inverse());
    return disjoint_product(std::move(inv));
  }
  if (!n->is_homeo()) throw CapabilityError("inverse of a non-invertible function node");
  return MapObject(std::make_shared<InverseNode>(*this));
}

MapObject identity_map() { return MapObject(); }

MapObject pl_map(const PLMap& f) {
  if (f.is_identity()) return identity_map();
  return MapObject(std::make_shared<PLNode>(f));
}

MapObject translation(double tau) { return MapObject(std::make_shared<TranslationNode>(tau)); }

MapObject circle_lift(std::vector<std::pair<double, double>> pts) {
  return MapObject(std::make_shared<CircleLiftNode>(std::move(pts)));
}

MapObject affine_chart(double lo, double hi, double s, double t) {
  if (s == 1.0 && t == 0.0) return identity_map();
  return MapObject(std::make_shared<AffineChartNode>(lo, hi, s, t));
}

MapObject mirror(const MapObject& f) {
  if (f.is_identity_node()) return f;
  return MapObject(std::make_shared<MirrorNode>(f));
}

MapObject compose(const MapObject& l, const MapObject& r) {
  if (l.is_identity_node()) return r;
  if (r.is_identity_node()) return l;
  return MapObject(std::make_shared<ComposeNode>(l, r));
}

MapObject compose(const std::vector<MapObject>& fs) {
  MapObject acc;
  for (auto it = fs.rbegin(); it != fs.rend(); ++it) acc = compose(*it, acc);
  return acc;
}

MapObject power(const MapObject& f, long n) {
  if (n == 0 || f.is_identity_node()) return identity_map();
  if (n == 1) return f;
  if (n == -1) return f.inverse();
  if (n < 0) return MapObject(std::make_shared<PowerNode>(f.inverse(), -n));
  return MapObject(std::make_shared<PowerNode>(f, n));
}

MapObject disjoint_product(std::vector<MapObject> fs) {
  std::vector<MapObject> keep;
  for (auto& f : fs)
    if (!f.is_identity_node()) keep.push_back(std::move(f));
  if (keep.empty()) return identity_map();
  if (keep.size() == 1) return keep.front();
  return MapObject(std::make_shared<DisjointProductNode>(std::move(keep)));
}

const PLMap* as_pl(const MapObject& f) {
  if (auto p = dynamic_cast<const PLNode*>(f.node().get())) return &p->map();
  return nullptr;
}

double eval_derivative(const MapObject& f, double x, int order) { return f.derivative(x, order); }

// ------------------------------------------------------------------ support / fixed points

IntervalSet numeric_support(const MapObject& f, Interval range, std::size_t grid) {
  IntervalSet out;
  auto moved = [&](double x) { return std::fabs(f.eval(x) - x) >= 1e-12 * (1.0 + std::fabs(x)); };
  auto refine = [&](double fixed, double mov) {
    for (int i = 0; i < 60; ++i) {
      double m = 0.5 * (fixed + mov);
      if (m == fixed || m == mov) break;
      if (moved(m)) mov = m;
      else fixed = m;
    }
    return 0.5 * (fixed + mov);
  };
  double h = (range.hi - range.lo) / static_cast<double>(grid);
  bool in = false;
  double start = range.lo, prev = range.lo;
  for (std::size_t i = 1; i < grid; ++i) {
    double x = range.lo + h * static_cast<double>(i);
    bool m = moved(x);
    if (m && !in) {
      start = i == 1 ? range.lo : refine(prev, x);
      in = true;
    } else if (!m && in) {
      out.push_back({start, refine(x, prev)});
      in = false;
    }
    prev = x;
  }
  if (in) out.push_back({start, range.hi});
  return out;
}

FixedPoints fixed_points_in(const MapObject& f, Interval J, std::size_t budget) {
  FixedPoints r;
  if (f.support_structural()) {
    IntervalSet s = f.support();
    std::sort(s.begin(), s.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    // closed gaps between consecutive components
    std::vector<Interval> gaps;
    double left = -kInf;
    for (auto& c : s) {
      gaps.push_back({left, c.lo});
      left = c.hi;
    }
    gaps.push_back({left, kInf});
    for (auto& g : gaps) {
      double lo = std::max(g.lo, J.lo), hi = std::min(g.hi, J.hi);
      if (lo > hi) continue;
      if (g.hi > g.lo) {
        r.accumulation = true;
        r.roots.push_back(lo);
        if (hi > lo) r.roots.push_back(hi);
      } else {
        r.roots.push_back(lo);
      }
    }
    return r;
  }
  std::size_t n = std::min<std::size_t>(budget, 100000);
  if (budget < 2) {
    r.partial = true;
    return r;
  }
  double h = (J.hi - J.lo) / static_cast<double>(n - 1);
  double prevx = J.lo, prevd = f.eval(J.lo) - J.lo;
  auto is_fixed = [](double x, double d) { return std::fabs(d) < 1e-12 * (1.0 + std::fabs(x)); };
  if (is_fixed(prevx, prevd)) r.roots.push_back(prevx);
  for (std::size_t i = 1; i < n; ++i) {
    double x = J.lo + h * static_cast<double>(i);
    double d = f.eval(x) - x;
    if (is_fixed(x, d)) {
      r.roots.push_back(x);
    } else if (!is_fixed(prevx, prevd) && (d > 0) != (prevd > 0)) {
      double a = prevx, b = x, da = prevd;
      for (int k = 0; k < 80; ++k) {
        double m = 0.5 * (a + b), dm = f.eval(m) - m;
        if ((dm > 0) == (da > 0)) {
          a = m;
          da = dm;
        } else {
          b = m;
        }
      }
      r.roots.push_back(0.5 * (a + b));
    }
    prevx = x;
    prevd = d;
  }
  if (budget < 1000) r.partial = true;
  return r;
}

double variation_estimate(const MapObject& f, int order, Interval J, std::size_t partition) {
  if (partition < 1) throw std::invalid_argument("variation_estimate: empty partition");
  double total = 0.0;
  double prev = f.derivative(J.lo, order);
  for (std::size_t i = 1; i <= partition; ++i) {
    double x = J.lo + (J.hi - J.lo) * static_cast<double>(i) / static_cast<double>(partition);
    double v = f.derivative(x, order);
    total += std::fabs(v - prev);
    prev = v;
  }
  return total;
}

RotationEstimate rotation_number(const MapObject& lift, std::size_t n) {
  if (n < 2) throw std::invalid_argument("rotation_number: need at least 2 iterations");
  double x = 0.0, half = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    x = lift.eval(x);
    if (i == n / 2) half = x;
  }
  RotationEstimate r;
  r.value = x / static_cast<double>(n);
  r.cauchy = std::fabs(r.value - half / static_cast<double>(n / 2));
  return r;
}

json interval_set_json(const IntervalSet& s) {
  json a = json::array();
  for (auto& i : s) a.push_back({dbl(i.lo), dbl(i.hi)});
  return a;
}

// Node families defined elsewhere register their readers here.
MapObject map_from_json_ext(const json& j);

MapObject map_from_json(const json& j) {
  std::string k = j.at("kind");
  if (k == "identity") return identity_map();
  if (k == "pl") {
    std::vector<std::pair<Dyadic, Dyadic>> pts;
    for (auto& p : j.at("breakpoints")) pts.emplace_back(Dyadic::parse(p[0]), Dyadic::parse(p[1]));
    return pl_map(PLMap(std::move(pts)));
  }
  if (k == "translation") return translation(j.at("tau").get<double>());
  if (k == "circle-lift") {
    std::vector<std::pair<double, double>> pts;
    for (auto& p : j.at("breakpoints")) pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    return circle_lift(std::move(pts));
  }
  if (k == "affine-chart")
    return affine_chart(j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("scale").get<double>(),
                        j.at("shift").get<double>());
  if (k == "mirror") return mirror(map_from_json(j.at("child")));
  if (k == "compose") return compose(map_from_json(j.at("left")), map_from_json(j.at("right")));
  if (k == "inverse") return map_from_json(j.at("child")).inverse();
  if (k == "power") return power(map_from_json(j.at("child")), j.at("n").get<long>());
  if (k == "disjoint-product") {
    std::vector<MapObject> fs;
    for (auto& c : j.at("factors")) fs.push_back(map_from_json(c));
    return disjoint_product(std::move(fs));
  }
  return map_from_json_ext(j);
}

}  // namespace crg
