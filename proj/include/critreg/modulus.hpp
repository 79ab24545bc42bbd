#pragma once
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace crg {

enum class ModulusKind { power, complex, lipschitz, empirical };

// Concave modulus of continuity. Closed forms are trusted on [0, radius]; beyond
// the radius the modulus continues along its tangent line at the radius.
class Modulus {
 public:
  static Modulus power(double tau);
  static Modulus complex(double tau, double s);
  static Modulus lipschitz();
  static Modulus empirical(std::vector<std::pair<double, double>> table);
  // "power:0.5", "complex:0.5,1", "lip"
  static Modulus parse(const std::string& descriptor);

  ModulusKind kind() const { return kind_; }
  double tau() const { return tau_; }
  double s() const { return s_; }
  double radius() const { return radius_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

  double operator()(double x) const { return eval(x); }
  double eval(double x) const;
  // The formula itself, without the tangent continuation; x in (0, 1/e) for complex kinds.
  double closed_form(double x) const;
  double derivative(double x) const;
  std::string descriptor() const;
  nlohmann::ordered_json to_json() const;
  static Modulus from_json(const nlohmann::ordered_json& j);

 private:
  ModulusKind kind_ = ModulusKind::lipschitz;
  double tau_ = 1.0;
  double s_ = 0.0;
  double radius_ = 1e308;
  std::vector<std::pair<double, double>> table_;
  void compute_radius();
};

enum class Verdict { holds, fails, inconclusive };
std::string verdict_name(Verdict v);

struct RegularityClass {
  int k = 1;
  enum class Tag { modulus, none, bv, lip } tag = Tag::modulus;
  Modulus omega = Modulus::lipschitz();
};

// Nested grid t in {1e-2, 1e-4, 1e-6} used by all limit verdicts.
const std::vector<double>& limit_levels();

double omega_norm_estimate(const std::vector<double>& xs, const std::vector<double>& fx, const Modulus& m,
                           const std::vector<std::pair<std::size_t, std::size_t>>& pairs);
// All pairs on a uniform grid, using shift differences.
double omega_norm_uniform(const std::vector<double>& fx, double h, const Modulus& m);

Verdict check_order_ll(const Modulus& omega, const Modulus& mu, const std::vector<double>& K_list,
                       const std::vector<double>& x_grid);
Verdict check_succ_k(const Modulus& omega, int k, const std::vector<double>& t_grid, const std::vector<double>& x_grid);
enum class TameMode { sup, sub };
Verdict check_tameness(const Modulus& omega, TameMode mode, const std::vector<double>& t_grid,
                       const std::vector<double>& x_grid);

struct OptimalModulus {
  std::vector<double> t;      // lags
  std::vector<double> mu_f;   // sup_{|x-y|<=t} |f(x)-f(y)|
  std::vector<double> mu1;    // least concave majorant of mu_f
  Modulus modulus;            // mu1 + Id as an empirical table
};
// f sampled on a uniform grid with spacing h.
OptimalModulus optimal_modulus(const std::vector<double>& fx, double h);

}  // namespace crg
