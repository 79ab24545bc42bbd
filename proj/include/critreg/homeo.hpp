#pragma once
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "critreg/dyadic.hpp"
#include "critreg/jet.hpp"
#include "json.hpp"

namespace crg {

using json = nlohmann::ordered_json;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0, hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo < x && x < hi; }
  bool contains_closed(double x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};
using IntervalSet = std::vector<Interval>;

class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Node {
 public:
  virtual ~Node() = default;
  virtual std::string kind() const = 0;
  virtual double eval(double x) const = 0;
  virtual Jet eval_jet(const Jet& x) const = 0;
  // default: monotone bracketing inside the support hull
  virtual double inverse_eval(double y) const;
  virtual IntervalSet support() const = 0;
  virtual bool support_structural() const { return true; }
  // convex hull of the support; outside it the node is the identity (or zero for functions)
  virtual Interval hull() const;
  virtual int max_order() const { return kMaxJet; }
  virtual std::string regularity() const { return "smooth"; }
  virtual Interval domain() const { return {-kInf, kInf}; }
  virtual bool is_homeo() const { return true; }
  virtual json to_json() const = 0;
  // n-fold iterate, n >= 0; stops early once the orbit is stationary
  virtual double iterate(double x, long n) const;
  // n-fold iterate of the inverse, n >= 0
  virtual double iterate_inverse(double x, long n) const;
};

using NodePtr = std::shared_ptr<const Node>;

// Immutable handle on a node DAG.
class MapObject {
 public:
  MapObject();
  explicit MapObject(NodePtr n) : node_(std::move(n)) {}

  double operator()(double x) const { return eval(x); }
  double eval(double x) const;
  double derivative(double x, int order) const;
  Jet jet(double x, int order) const;
  double inverse_eval(double y) const;
  // f^n(x) for n >= 0
  double iterate(double x, long n) const;
  MapObject inverse() const;
  IntervalSet support() const { return node_->support(); }
  bool support_structural() const { return node_->support_structural(); }
  Interval hull() const { return node_->hull(); }
  std::string kind() const { return node_->kind(); }
  std::string regularity() const { return node_->regularity(); }
  int max_order() const { return node_->max_order(); }
  Interval domain() const { return node_->domain(); }
  json to_json() const { return node_->to_json(); }
  const NodePtr& node() const { return node_; }
  bool is_identity_node() const;

 private:
  NodePtr node_;
};

// builders
MapObject identity_map();
MapObject pl_map(const PLMap& f);
MapObject translation(double tau);
// circle lift F(x+1) = F(x)+1, given by breakpoints (x_j, F(x_j)) over one period [x_0, x_0+1]
MapObject circle_lift(std::vector<std::pair<double, double>> pts);
// chart-conjugated affine map z -> s z + t, chart z = 2 atanh(u), u = (2x-lo-hi)/(hi-lo)
MapObject affine_chart(double lo, double hi, double s, double t);
MapObject mirror(const MapObject& f);
MapObject compose(const MapObject& left, const MapObject& right);
MapObject compose(const std::vector<MapObject>& factors);  // f1 o f2 o ... o fn
MapObject power(const MapObject& f, long n);               // n may be negative
// product of maps with pairwise disjoint support hulls
MapObject disjoint_product(std::vector<MapObject> factors);

// PL map accessor when the node is exact PL
const PLMap* as_pl(const MapObject& f);

// Evaluation helpers
double eval_derivative(const MapObject& f, double x, int order);

struct FixedPoints {
  std::vector<double> roots;
  bool accumulation = false;
  bool partial = false;
};
FixedPoints fixed_points_in(const MapObject& f, Interval J, std::size_t budget = 100000);

double variation_estimate(const MapObject& f, int order, Interval J, std::size_t partition);

struct RotationEstimate {
  double value = 0.0;
  double cauchy = 0.0;
};
RotationEstimate rotation_number(const MapObject& lift, std::size_t n_iters);

// numeric support scan of an arbitrary map within [lo, hi]
IntervalSet numeric_support(const MapObject& f, Interval range, std::size_t grid);

json interval_set_json(const IntervalSet& s);
MapObject map_from_json(const json& j);

// Internal helpers shared with other node families.
double numeric_inverse(const Node& n, double y, Interval bracket);
IntervalSet merge_sets(IntervalSet a, const IntervalSet& b);
bool sets_disjoint(const IntervalSet& a, const IntervalSet& b);

}  // namespace crg
