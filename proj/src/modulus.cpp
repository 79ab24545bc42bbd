#include "critreg/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "critreg/kernels.hpp"

namespace crg {

namespace {
const double kRadiusCap = std::exp(-std::exp(2.0));
}

Modulus Modulus::power(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("power modulus needs tau in (0,1]");
  Modulus m;
  m.kind_ = tau == 1.0 ? ModulusKind::lipschitz : ModulusKind::power;
  m.tau_ = tau;
  m.compute_radius();
  return m;
}

Modulus Modulus::complex(double tau, double s) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("complex modulus needs tau in [0,1]");
  if (s == 0.0) return power(tau);
  if (tau == 0.0 && s < 0.0) throw std::invalid_argument("complex modulus with tau=0 needs s>0");
  if (tau == 1.0 && s > 0.0) throw std::invalid_argument("complex modulus with tau=1 needs s<0");
  Modulus m;
  m.kind_ = ModulusKind::complex;
  m.tau_ = tau;
  m.s_ = s;
  m.compute_radius();
  return m;
}

Modulus Modulus::lipschitz() { return power(1.0); }

Modulus Modulus::empirical(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2) throw std::invalid_argument("empirical modulus needs at least 2 samples");
  std::sort(table.begin(), table.end());
  if (table.front().first != 0.0) table.insert(table.begin(), {0.0, 0.0});
  table.front().second = 0.0;
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table[i].second < table[i - 1].second) throw std::invalid_argument("empirical modulus table not monotone");
  Modulus m;
  m.kind_ = ModulusKind::empirical;
  m.table_ = std::move(table);
  m.radius_ = m.table_.back().first;
  return m;
}

Modulus Modulus::parse(const std::string& d) {
  if (d == "lip" || d == "lipschitz") return lipschitz();
  auto colon = d.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("bad modulus descriptor: " + d);
  std::string kind = d.substr(0, colon), rest = d.substr(colon + 1);
  try {
    if (kind == "power") return power(std::stod(rest));
    if (kind == "complex") {
      auto comma = rest.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("complex modulus needs tau,s");
      return complex(std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1)));
    }
  } catch (const std::logic_error& e) {
    throw std::invalid_argument("bad modulus descriptor: " + d + " (" + e.what() + ")");
  }
  throw std::invalid_argument("bad modulus descriptor: " + d);
}

double Modulus::closed_form(double x) const {
  if (x < 0.0) throw std::domain_error("modulus evaluated at negative x");
  if (x == 0.0) return 0.0;
  switch (kind_) {
    case ModulusKind::lipschitz:
      return x;
    case ModulusKind::power:
      return std::pow(x, tau_);
    case ModulusKind::complex: {
      double L = std::log(1.0 / x);
      return std::pow(x, tau_) * std::exp(-s_ * L / std::log(L));
    }
    case ModulusKind::empirical: {
      auto it = std::lower_bound(table_.begin(), table_.end(), std::make_pair(x, -1.0));
      if (it == table_.end()) {
        auto& a = table_[table_.size() - 2];
        auto& b = table_.back();
        return b.second + (x - b.first) * (b.second - a.second) / (b.first - a.first);
      }
      if (it->first == x) return it->second;
      auto prev = it - 1;
      return prev->second + (x - prev->first) * (it->second - prev->second) / (it->first - prev->first);
    }
  }
  return x;
}

double Modulus::derivative(double x) const {
  if (x < radius_ || kind_ == ModulusKind::empirical) {
    switch (kind_) {
      case ModulusKind::lipschitz:
        return 1.0;
      case ModulusKind::power:
        return x == 0.0 ? INFINITY : tau_ * std::pow(x, tau_ - 1.0);
      case ModulusKind::complex: {
        if (x == 0.0) return INFINITY;
        double L = std::log(1.0 / x), lL = std::log(L);
        // d/dx of -s L/log L with dL/dx = -1/x
        double dexp = s_ * (lL - 1.0) / (lL * lL) / x;
        return closed_form(x) * (tau_ / x + dexp);
      }
      case ModulusKind::empirical: {
        double h = 1e-7 * std::max(1.0, x);
        double lo = std::max(0.0, x - h);
        return (closed_form(x + h) - closed_form(lo)) / (x + h - lo);
      }
    }
  }
  return derivative(radius_ * (1.0 - 1e-15));
}

double Modulus::eval(double x) const {
  if (x < 0.0) throw std::domain_error("modulus evaluated at negative x");
  if (x == 0.0) return 0.0;
  if (kind_ == ModulusKind::complex && x > radius_) {
    return closed_form(radius_) + derivative(radius_ * (1.0 - 1e-15)) * (x - radius_);
  }
  return closed_form(x);
}

void Modulus::compute_radius() {
  if (kind_ != ModulusKind::complex) {
    radius_ = INFINITY;
    return;
  }
  // Scan downward from the cap on a geometric grid; the radius is the largest grid
  // point below which every sampled second difference and slope has the right sign.
  const int n = 4000;
  double logcap = std::log(kRadiusCap), loglo = std::log(1e-300);
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    double x = std::exp(logcap + (loglo - logcap) * i / n);
    double h = x * 1e-3;
    double f0 = closed_form(x - h), f1 = closed_form(x), f2 = closed_form(x + h);
    bool ok = (f2 - 2 * f1 + f0) <= 1e-15 * std::fabs(f1) && f2 > f0;
    if (ok && best == 0.0) best = x;
    if (!ok) best = 0.0;
  }
  if (best == 0.0) throw std::runtime_error("complex modulus has no concave range below the cap");
  radius_ = best;
}

std::string Modulus::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case ModulusKind::lipschitz: return "lip";
    case ModulusKind::power: os << "power:" << tau_; break;
    case ModulusKind::complex: os << "complex:" << tau_ << "," << s_; break;
    case ModulusKind::empirical: os << "empirical:" << table_.size(); break;
  }
  return os.str();
}

nlohmann::ordered_json Modulus::to_json() const {
  nlohmann::ordered_json j;
  switch (kind_) {
    case ModulusKind::lipschitz: j["kind"] = "lipschitz"; break;
    case ModulusKind::power: j["kind"] = "power"; break;
    case ModulusKind::complex: j["kind"] = "complex"; break;
    case ModulusKind::empirical: {
      j["kind"] = "empirical";
      auto t = nlohmann::ordered_json::array();
      for (auto& [a, b] : table_) t.push_back({a, b});
      j["table"] = t;
      return j;
    }
  }
  j["tau"] = tau_;
  j["s"] = s_;
  j["radius"] = std::isfinite(radius_) ? nlohmann::ordered_json(radius_) : nlohmann::ordered_json("inf");
  return j;
}

Modulus Modulus::from_json(const nlohmann::ordered_json& j) {
  std::string k = j.at("kind");
  if (k == "lipschitz") return lipschitz();
  if (k == "power") return power(j.at("tau").get<double>());
  if (k == "complex") return complex(j.at("tau").get<double>(), j.at("s").get<double>());
  if (k == "empirical") {
    std::vector<std::pair<double, double>> t;
    for (auto& row : j.at("table")) t.emplace_back(row[0].get<double>(), row[1].get<double>());
    return empirical(std::move(t));
  }
  throw std::invalid_argument("unknown modulus kind " + k);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds-empirically";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

const std::vector<double>& limit_levels() {
  static const std::vector<double> v{1e-2, 1e-4, 1e-6};
  return v;
}

double omega_norm_estimate(const std::vector<double>& xs, const std::vector<double>& fx, const Modulus& m,
                           const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("omega_norm_estimate: empty sample set");
  std::vector<double> a, b, w;
  a.reserve(pairs.size());
  b.reserve(pairs.size());
  w.reserve(pairs.size());
  for (auto [i, j] : pairs) {
    double d = std::fabs(xs[i] - xs[j]);
    if (d == 0.0) continue;
    a.push_back(fx[i]);
    b.push_back(fx[j]);
    w.push_back(m(d));
  }
  if (a.empty()) return 0.0;
  return kernels::max_ratio(a.data(), b.data(), w.data(), a.size());
}

double omega_norm_uniform(const std::vector<double>& fx, double h, const Modulus& m) {
  if (fx.size() < 2) throw std::invalid_argument("omega_norm_uniform: need at least 2 samples");
  double best = 0.0;
  for (std::size_t d = 1; d < fx.size(); ++d) {
    double v = kernels::max_shift_diff(fx.data(), fx.size(), d) / m(d * h);
    best = std::max(best, v);
  }
  return best;
}

namespace {

// The sup over x of r(t, x) must fall by 10x per nested level and end below 1e-6*start
// or be tiny outright.
Verdict limit_verdict(const std::vector<double>& sups) {
  for (double s : sups)
    if (!std::isfinite(s)) return Verdict::fails;
  bool decreasing = true;
  for (std::size_t i = 1; i < sups.size(); ++i)
    if (!(sups[i] <= sups[i - 1] / 10.0 * (1.0 + 1e-6) || sups[i] < 1e-12)) decreasing = false;
  if (decreasing) return Verdict::holds;
  bool growing = true;
  for (std::size_t i = 1; i < sups.size(); ++i)
    if (!(sups[i] >= sups[i - 1] * (1.0 - 1e-6))) growing = false;
  return growing ? Verdict::fails : Verdict::inconclusive;
}

}  // namespace

Verdict check_order_ll(const Modulus& omega, const Modulus& mu, const std::vector<double>& K_list,
                       const std::vector<double>& x_grid) {
  // omega(x) log^K(1/x) / mu(x) -> 0: for each K, sample the ratio along the decreasing grid
  // and require the tail to be decreasing to a value well below the start.
  bool all = true;
  for (double K : K_list) {
    std::vector<double> r;
    for (double x : x_grid) r.push_back(omega(x) * std::pow(std::log(1.0 / x), K) / mu(x));
    // the ratio must eventually decrease; we look at the last half of the grid
    std::size_t half = r.size() / 2;
    bool dec = true;
    for (std::size_t i = half + 1; i < r.size(); ++i)
      if (!(r[i] < r[i - 1] * (1.0 + 1e-9))) dec = false;
    if (!dec || !(r.back() < 0.5 * r[half])) all = false;
  }
  return all ? Verdict::holds : Verdict::fails;
}

Verdict check_succ_k(const Modulus& omega, int k, const std::vector<double>& t_grid,
                     const std::vector<double>& x_grid) {
  std::vector<double> sups;
  for (double t : t_grid) {
    double s = 0.0;
    for (double x : x_grid) s = std::max(s, std::pow(t, k - 1) * omega(t * x) / omega(x));
    sups.push_back(s);
  }
  return limit_verdict(sups);
}

Verdict check_tameness(const Modulus& omega, TameMode mode, const std::vector<double>& t_grid,
                       const std::vector<double>& x_grid) {
  std::vector<double> sups;
  for (double t : t_grid) {
    double s = 0.0;
    for (double x : x_grid) {
      double r = mode == TameMode::sup ? t * omega(x) / omega(t * x) : omega(t * x) / omega(x);
      s = std::max(s, r);
    }
    sups.push_back(s);
  }
  // Tameness ratios may decay slowly (log factors); accept a strict decrease to a small
  // value as well as the 10x-per-level rule.
  Verdict v = limit_verdict(sups);
  if (v == Verdict::holds) return v;
  bool dec = true;
  for (std::size_t i = 1; i < sups.size(); ++i)
    if (!(sups[i] < sups[i - 1])) dec = false;
  if (dec && sups.back() < 0.5 * sups.front()) return Verdict::holds;
  return v;
}

OptimalModulus optimal_modulus(const std::vector<double>& fx, double h) {
  if (fx.size() < 2) throw std::invalid_argument("optimal_modulus: fewer than 2 samples");
  OptimalModulus out;
  std::size_t n = fx.size();
  out.t.push_back(0.0);
  out.mu_f.push_back(0.0);
  double run = 0.0;
  for (std::size_t d = 1; d < n; ++d) {
    run = std::max(run, kernels::max_shift_diff(fx.data(), n, d));
    out.t.push_back(d * h);
    out.mu_f.push_back(run);
  }
  // least concave majorant via upper hull
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    while (hull.size() >= 2) {
      std::size_t a = hull[hull.size() - 2], b = hull.back();
      double cross = (out.t[b] - out.t[a]) * (out.mu_f[i] - out.mu_f[a]) -
                     (out.mu_f[b] - out.mu_f[a]) * (out.t[i] - out.t[a]);
      if (cross >= 0) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  out.mu1.resize(out.t.size());
  for (std::size_t j = 0; j + 1 < hull.size(); ++j) {
    std::size_t a = hull[j], b = hull[j + 1];
    for (std::size_t i = a; i <= b; ++i)
      out.mu1[i] = out.mu_f[a] + (out.mu_f[b] - out.mu_f[a]) * (out.t[i] - out.t[a]) / (out.t[b] - out.t[a]);
  }
  // the hull is nondecreasing because mu_f is
  std::vector<std::pair<double, double>> table;
  for (std::size_t i = 0; i < out.t.size(); ++i) table.emplace_back(out.t[i], out.mu1[i] + out.t[i]);
  out.modulus = Modulus::empirical(std::move(table));
  return out;
}

}  // namespace crg
