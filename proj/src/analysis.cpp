#include "critreg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "critreg/kernels.hpp"

namespace crg {

// ---- detectors ----

json FastReport::to_json() const {
  return json{{"J", {J.lo, J.hi}},      {"N", N},
              {"fastness", fastness},   {"fast_at", fast_at},
              {"expansiveness", expansiveness}, {"exp_at", exp_at},
              {"E", {alt[0], alt[1], alt[2], alt[3]}}, {"k", k}, {"k_fixed", k_fixed},
              {"early", early}};
}

namespace {

struct Sample {
  double y, fy;
};

void score(FastReport& r, double y, double fy) {
  const double lo = r.J.lo, hi = r.J.hi, len = r.J.length();
  double disp = std::abs(fy - y);
  if (disp / len > r.fastness) {
    r.fastness = disp / len;
    r.fast_at = y;
  }
  if (!(lo < y && y < hi && lo < fy && fy < hi) || disp == 0.0) return;
  double e[4] = {0, 0, 0, 0};
  if (fy > y) {
    e[0] = disp / (y - lo);
    e[1] = disp / (hi - fy);
  } else {
    e[2] = disp / (fy - lo);
    e[3] = disp / (hi - y);
  }
  for (int j = 0; j < 4; ++j) {
    if (e[j] > r.alt[j]) r.alt[j] = e[j];
    if (e[j] > r.expansiveness) {
      r.expansiveness = e[j];
      r.exp_at = y;
    }
  }
}

}  // namespace

FastReport measure_fastness(const MapObject& f, Interval J, long N, std::size_t grid, int k) {
  return measure_fastness(f, J, N, grid, k, {});
}

namespace {

std::vector<double> fastness_points(const MapObject& f, Interval J, std::size_t grid,
                                    const std::vector<double>& extra) {
  if (!(J.length() > 0.0)) throw std::invalid_argument("measure_fastness: empty interval");
  double tolJ = 1e-12 * (1.0 + std::abs(J.lo) + std::abs(J.hi));
  if (std::abs(f.eval(J.lo) - J.lo) > tolJ || std::abs(f.eval(J.hi) - J.hi) > tolJ)
    throw std::invalid_argument("measure_fastness: J is not invariant");
  const double len = J.length();
  std::vector<double> ys;
  grid = std::max<std::size_t>(grid, 2);
  for (std::size_t j = 0; j < grid; ++j) ys.push_back(J.lo + len * (static_cast<double>(j) + 0.5) / static_cast<double>(grid));
  for (int j = 1; j <= 60; ++j) {
    double d = std::ldexp(len, -j);
    if (J.lo + d == J.lo || J.hi - d == J.hi) break;
    ys.push_back(J.lo + d);
    ys.push_back(J.hi - d);
  }
  for (double y : extra)
    if (J.lo < y && y < J.hi) ys.push_back(y);
  return ys;
}

void refine(FastReport& r, const MapObject& f, std::size_t grid) {
  const double len = r.J.length();
  for (double c : {r.fast_at, r.exp_at}) {
    double d = std::min({len / static_cast<double>(std::max<std::size_t>(grid, 2)), c - r.J.lo, r.J.hi - c});
    if (!(d > 0.0)) continue;
    for (int j = -16; j <= 16; ++j) {
      double y = c + d * j / 16.0;
      if (r.J.lo < y && y < r.J.hi) score(r, y, f.iterate(y, r.N));
    }
  }
}

void mark_k_fixed(FastReport& r, const MapObject& f) {
  auto fx = fixed_points_in(f, r.J);
  r.k_fixed = fx.accumulation || static_cast<int>(fx.roots.size()) > r.k;
}

}  // namespace

FastReport measure_fastness(const MapObject& f, Interval J, long N, std::size_t grid, int k,
                            const std::vector<double>& extra) {
  if (N < 1) throw std::invalid_argument("measure_fastness: N must be positive");
  auto ys = fastness_points(f, J, grid, extra);
  FastReport r;
  r.J = J;
  r.N = N;
  r.k = k;
  for (double y : ys) score(r, y, f.iterate(y, N));
  refine(r, f, grid);
  mark_k_fixed(r, f);
  return r;
}

FastReport classify_fastness(const MapObject& f, Interval J, long N, std::size_t grid, int k, double delta,
                             double lambda) {
  if (N < 1) throw std::invalid_argument("classify_fastness: N must be positive");
  auto ys = fastness_points(f, J, grid, {});
  // midpoint first, then the uniform grid by bisection order, then the geometric points
  std::size_t g = std::max<std::size_t>(grid, 2);
  std::vector<std::size_t> order;
  std::vector<bool> seen(ys.size(), false);
  for (std::size_t step = g; step >= 1; step /= 2) {
    for (std::size_t j = step / 2; j < g; j += std::max<std::size_t>(step, 1))
      if (!seen[j]) seen[j] = true, order.push_back(j);
    if (step == 1) break;
  }
  for (std::size_t j = 0; j < ys.size(); ++j)
    if (!seen[j]) order.push_back(j);
  FastReport r;
  r.J = J;
  r.N = N;
  r.k = k;
  for (std::size_t j : order) {
    score(r, ys[j], f.iterate(ys[j], N));
    if (r.fastness >= delta || r.expansiveness >= lambda) {
      r.early = true;
      break;
    }
  }
  if (!r.early) refine(r, f, grid);
  mark_k_fixed(r, f);
  return r;
}

json RootMeanCheck::to_json() const {
  return json{{"fast_N", fast_N}, {"fast_1", fast_1}, {"fast_bound", fast_bound}, {"fast_ok", fast_ok},
              {"exp_N", exp_N},   {"exp_1", exp_1},   {"exp_bound", exp_bound},   {"exp_ok", exp_ok}};
}

RootMeanCheck root_mean_inequalities(const MapObject& f, Interval J, long N, double delta, double lambda,
                                     std::size_t grid, double tol) {
  FastReport rN = measure_fastness(f, J, N, grid);
  // orbit points of the maximizers: the proof locates the root's witness among them
  std::vector<double> orbit;
  for (double y : {rN.fast_at, rN.exp_at}) {
    double x = y;
    for (long i = 0; i < N && i < 200000; ++i) {
      orbit.push_back(x);
      x = f.eval(x);
    }
  }
  FastReport r1 = measure_fastness(f, J, 1, grid, 1, orbit);
  RootMeanCheck c;
  c.fast_N = rN.fastness;
  c.exp_N = rN.expansiveness;
  c.fast_1 = r1.fastness;
  c.exp_1 = r1.expansiveness;
  double d = std::max(delta, rN.fastness);
  double l = std::max(lambda, rN.expansiveness);
  c.fast_bound = d / static_cast<double>(N);
  c.exp_bound = std::pow(l + 1.0, 1.0 / static_cast<double>(N)) - 1.0;
  // implications only: a hypothesis that fails makes the check vacuous
  c.fast_ok = rN.fastness < delta || r1.fastness >= c.fast_bound * (1.0 - tol) - tol;
  c.exp_ok = rN.expansiveness < lambda || r1.expansiveness >= c.exp_bound * (1.0 - tol) - tol;
  return c;
}

double derivative_deviation(const MapObject& f, Interval J, int k, std::size_t grid) {
  double best = 0.0;
  for (std::size_t j = 0; j <= grid; ++j) {
    double y = J.lo + J.length() * static_cast<double>(j) / static_cast<double>(grid);
    double v = eval_derivative(f, y, k) - (k == 1 ? 1.0 : 0.0);
    best = std::max(best, std::abs(v));
  }
  return best * std::pow(J.length(), k - 1);
}

// ---- density ----

Predicate named_set(const std::string& name) {
  auto is_square = [](long i) {
    auto r = static_cast<long>(std::llround(std::sqrt(static_cast<double>(i))));
    return r * r == i;
  };
  if (name == "evens") return [](long i) { return i % 2 == 0; };
  if (name == "odds") return [](long i) { return i % 2 != 0; };
  if (name == "squares") return is_square;
  if (name == "nonsquares") return [is_square](long i) { return !is_square(i); };
  if (name == "all") return [](long) { return true; };
  if (name == "none") return [](long) { return false; };
  if (name.rfind("multiples:", 0) == 0) {
    long m = std::stol(name.substr(10));
    if (m <= 0) throw std::invalid_argument("multiples: modulus must be positive");
    return [m](long i) { return i % m == 0; };
  }
  throw std::invalid_argument("unknown set '" + name + "'");
}

Predicate window_set(Predicate A, long s) {
  if (s < 1) throw std::invalid_argument("window_set: s must be positive");
  return [A = std::move(A), s](long i) {
    for (long j = 0; j < s; ++j)
      if (!A(i + j)) return false;
    return true;
  };
}

std::vector<long> geometric_schedule(long N_max, long first) {
  std::vector<long> s;
  for (long base = first; base < N_max; base *= 10)
    for (long m : {1L, 2L, 5L})
      if (base * m < N_max) s.push_back(base * m);
  s.push_back(N_max);
  return s;
}

json DensityEstimate::to_json() const {
  json rows = json::array();
  for (std::size_t j = 0; j < N.size(); ++j) rows.push_back({{"N", N[j]}, {"count", count[j]}, {"ratio", ratio[j]}});
  return json{{"schedule", rows}, {"final_ratio", final_ratio()}, {"trend", trend}};
}

namespace {

void set_trend(DensityEstimate& d) {
  if (d.ratio.size() < 2) {
    d.trend = "flat";
    return;
  }
  // compare the last value with the value a factor of ~100 earlier
  std::size_t j0 = 0;
  for (std::size_t j = 0; j < d.N.size(); ++j)
    if (d.N[j] * 100 <= d.N.back()) j0 = j;
  double early = d.ratio[j0], late = d.ratio.back();
  if (late < 0.9 * early - 1e-12) d.trend = "decreasing";
  else if (late > 1.1 * early + 1e-12) d.trend = "increasing";
  else d.trend = "flat";
}

}  // namespace

DensityEstimate natural_density(const Predicate& A, long N_max, const std::vector<long>& schedule) {
  if (N_max < 1) throw std::invalid_argument("natural_density: N_max must be positive");
  DensityEstimate d;
  d.N = schedule.empty() ? geometric_schedule(N_max) : schedule;
  std::sort(d.N.begin(), d.N.end());
  long cnt = 0;
  std::size_t j = 0;
  for (long i = 1; i <= d.N.back(); ++i) {
    if (A(i)) ++cnt;
    while (j < d.N.size() && d.N[j] == i) {
      d.count.push_back(cnt);
      d.ratio.push_back(static_cast<double>(cnt) / static_cast<double>(i));
      ++j;
    }
  }
  set_trend(d);
  return d;
}

DensityEstimate natural_density(const std::vector<bool>& in, const std::vector<long>& schedule) {
  auto n = static_cast<long>(in.size());
  if (n < 1) throw std::invalid_argument("natural_density: empty membership vector");
  std::vector<long> s = schedule.empty() ? geometric_schedule(n) : schedule;
  return natural_density([&in](long i) { return in[static_cast<std::size_t>(i - 1)]; }, n, s);
}

// ---- verdicts ----

json QuartileVerdict::to_json() const {
  return json{{"first_quartile_max", first_max}, {"last_quartile_min", last_min}, {"margin", margin},
              {"diverging", diverging}};
}

QuartileVerdict quartile_verdict(const std::vector<double>& seq, double margin) {
  QuartileVerdict v;
  v.margin = margin;
  if (seq.size() < 4) return v;
  std::size_t q = seq.size() / 4;
  v.first_max = *std::max_element(seq.begin(), seq.begin() + static_cast<long>(q));
  v.last_min = *std::min_element(seq.end() - static_cast<long>(q), seq.end());
  v.diverging = v.last_min >= v.first_max + margin;
  return v;
}

// ---- certificates ----

std::string cert_name(CertVerdict v) {
  switch (v) {
    case CertVerdict::nontrivial: return "nontrivial";
    case CertVerdict::trivial: return "trivial";
    default: return "inconclusive";
  }
}

json CommutatorCertificate::to_json() const {
  return json{{"verdict", cert_name(verdict)}, {"witness", witness}, {"displacement", displacement}, {"reason", reason}};
}

std::vector<double> uniform_grid(Interval I, std::size_t n) {
  std::vector<double> g;
  if (n == 0) return g;
  for (std::size_t j = 0; j < n; ++j) g.push_back(I.lo + I.length() * (static_cast<double>(j) + 0.5) / static_cast<double>(n));
  return g;
}

double displacement_sup(const Representation& rep, const Word& w, const std::vector<double>& grid) {
  std::vector<double> a(grid.size()), b(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    a[j] = rep.act(w, grid[j]);
    b[j] = grid[j];
  }
  return kernels::max_abs_diff(a.data(), b.data(), a.size());
}

CommutatorCertificate commutator_certificate(const Phi& phi, const Word& u, const Word& h, Interval U,
                                             std::size_t grid) {
  CommutatorCertificate c;
  const auto& rep = phi.rep;
  double t0 = 1e-12 * (1.0 + std::abs(U.lo)), t1 = 1e-12 * (1.0 + std::abs(U.hi));
  double hlo = rep.act(h, U.lo), hhi = rep.act(h, U.hi);
  if (std::abs(hlo - U.lo) <= t0 && std::abs(hhi - U.hi) <= t1) {
    c.reason = "phi(h) U = U";
    return c;
  }
  CoverResult cd = covering_distance(phi.cover, U.lo, U.hi);
  long len = syllable_length(h);
  if (cd.infinite) {
    c.reason = "U not inside one support component";
    return c;
  }
  if (len >= cd.value) {
    c.reason = cd.lower_bound ? "horizon reached before cd(inf U, sup U) exceeds |h|" : "|h| >= cd(inf U, sup U)";
    return c;
  }
  Word comm = commutator(u, h * u * h.inverse());
  Interval hull{std::min(U.lo, hlo), std::max(U.hi, hhi)};
  for (double x : uniform_grid(hull, grid)) {
    double d = std::abs(rep.act(comm, x) - x);
    if (d > c.displacement) {
      c.displacement = d;
      c.witness = x;
    }
  }
  if (c.displacement > 1e-8) {
    c.verdict = CertVerdict::nontrivial;
    c.reason = "witness found";
  } else {
    c.verdict = CertVerdict::trivial;
    c.reason = "no witness on the grid";
  }
  return c;
}

Representation trivial_representation(Interval ambient) {
  return Representation({identity_map(), identity_map(), identity_map(), identity_map(), identity_map()}, ambient,
                        "trivial");
}

Representation toy_psi() {
  // a, e: BS(1,2) in a chart on (0.2,0.4); c: chart translation on (0.45,0.85), commuting with
  // both by disjointness; d drags supp c across supp e. b is free in G, a slow translation of (0,1).
  MapObject a = affine_chart(0.2, 0.4, 2.0, 0.0);
  MapObject e = affine_chart(0.2, 0.4, 1.0, 1.25);
  MapObject c = affine_chart(0.45, 0.85, 1.0, 2.5);
  MapObject d = affine_chart(0.05, 0.95, 1.0, 0.5);
  MapObject b = affine_chart(0.0, 1.0, 1.0, 0.002);
  return Representation({a, b, c, d, e}, {0.0, 1.0}, "toy");
}

// ---- compactification ----

json FlatnessReport::to_json() const {
  json rows = json::array();
  for (std::size_t j = 0; j < h.size(); ++j) rows.push_back({{"h", h[j]}, {"d0", diffs[j][0]}, {"d1", diffs[j][1]}, {"d2", diffs[j][2]}});
  return json{{"levels", rows}, {"worst", worst}};
}

FlatnessReport compactify_flatness(const MapObject& g, int k, bool at_one, std::size_t levels) {
  if (k < 0 || k > 2) throw std::invalid_argument("compactify_flatness: orders 0..2 supported");
  MapObject F = compactify_map(g);
  // F - Id at the endpoint along the inward direction
  auto R = [&](double t) {
    double x = at_one ? 1.0 - t : t;
    double v = F.eval(x) - x;
    return at_one ? -v : v;
  };
  FlatnessReport r;
  double h = 0.05;
  for (std::size_t j = 0; j < levels; ++j, h *= 0.5) {
    double r0 = R(0.0), r1 = R(h), r2 = R(2.0 * h);
    std::array<double, 3> d{};
    d[0] = std::abs(r1);
    d[1] = std::abs((r1 - r0) / h);
    d[2] = std::abs((r2 - 2.0 * r1 + r0) / (h * h));
    r.h.push_back(h);
    r.diffs.push_back(d);
    for (int i = 0; i <= k; ++i) r.worst = std::max(r.worst, d[static_cast<std::size_t>(i)]);
  }
  return r;
}

// ---- output ----

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (j) s += ',';
    s += cells[j];
  }
  return s;
}

}  // namespace crg
