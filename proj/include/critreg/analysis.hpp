#pragma once
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "critreg/construct.hpp"

namespace crg {

// ---- detectors ----

struct FastReport {
  Interval J;
  long N = 1;
  double fastness = 0.0;         // sup |f^N y - y| / |J|
  double fast_at = 0.0;
  double expansiveness = 0.0;    // sup |f^N y - y| / d({y, f^N y}, dJ)
  double exp_at = 0.0;
  std::array<double, 4> alt{};   // sup ratios of the alternatives E1..E4
  bool k_fixed = false;
  int k = 1;
  bool early = false;            // scan stopped once a threshold was met; the sups are lower bounds
  json to_json() const;
};
// Grid sup over J (uniform plus geometric points near both ends), then one refinement pass
// around each argmax.
FastReport measure_fastness(const MapObject& f, Interval J, long N, std::size_t grid, int k = 1);
// extra sample points (for instance orbit points) merged into the grid
FastReport measure_fastness(const MapObject& f, Interval J, long N, std::size_t grid, int k,
                            const std::vector<double>& extra);
// Same sample points, but stops as soon as fastness >= delta or expansiveness >= lambda.
FastReport classify_fastness(const MapObject& f, Interval J, long N, std::size_t grid, int k, double delta,
                             double lambda);

struct RootMeanCheck {
  double fast_N = 0.0, fast_1 = 0.0, fast_bound = 0.0;
  double exp_N = 0.0, exp_1 = 0.0, exp_bound = 0.0;
  bool fast_ok = false, exp_ok = false;
  json to_json() const;
};
// If f^N is delta-fast (lambda-expansive) then f is delta/N-fast ((lambda+1)^{1/N}-1-expansive);
// the hypotheses are the measured values for f^N, with delta, lambda as floors.
RootMeanCheck root_mean_inequalities(const MapObject& f, Interval J, long N, double delta, double lambda,
                                     std::size_t grid = 512, double tol = 1e-9);

// sup over the grid of |f^(k) - Id^(k)| |J|^{k-1}
double derivative_deviation(const MapObject& f, Interval J, int k, std::size_t grid);

// ---- natural density ----

using Predicate = std::function<bool(long)>;
// "evens", "odds", "squares", "nonsquares", "multiples:<m>", "all", "none"
Predicate named_set(const std::string& name);
// {i : i + [s]* is contained in A}, [s]* = {0,...,s-1}
Predicate window_set(Predicate A, long s);

struct DensityEstimate {
  std::vector<long> N;         // geometric schedule
  std::vector<long> count;     // #(A cap [1,N])
  std::vector<double> ratio;
  double final_ratio() const { return ratio.empty() ? 0.0 : ratio.back(); }
  std::string trend;           // "decreasing", "increasing", "flat"
  json to_json() const;
};
std::vector<long> geometric_schedule(long N_max, long first = 10);
DensityEstimate natural_density(const Predicate& A, long N_max, const std::vector<long>& schedule = {});
// density of an explicit membership vector in[i-1] for i = 1..n
DensityEstimate natural_density(const std::vector<bool>& in, const std::vector<long>& schedule = {});

// ---- trend verdicts ----

struct QuartileVerdict {
  double first_max = 0.0, last_min = 0.0, margin = 3.0;
  bool diverging = false;
  json to_json() const;
};
QuartileVerdict quartile_verdict(const std::vector<double>& seq, double margin = 3.0);

// ---- rung density ----

struct TheoremEstConfig {
  int k = 2;
  Modulus mu = Modulus::power(0.3);     // calibration of N_i
  Modulus omega = Modulus::power(0.6);  // regularity of f
  long kstar = 20;
  double eps0 = 1e-3;
  double delta = 0.5, lambda = 1.0;
  std::size_t i_max = 500;
  double gap_ratio = 0.1;  // gap after J_i is gap_ratio * ell_i
  std::size_t grid = 256;
  bool identity = false;   // measure the identity map instead
};
struct TheoremEstRow {
  std::size_t i = 0;
  double ell = 0.0;
  long N = 0;
  double fastness = 0.0, expansiveness = 0.0;
  bool fast = false, expansive = false, k_fixed = false;
  bool lower_bounds = false;  // fastness and expansiveness are partial sups
};
struct TheoremEstResult {
  TheoremEstConfig config;
  std::vector<TheoremEstRow> rows;
  DensityEstimate density;
  double hypothesis_sup = 0.0;       // sup_i N_i (1/i)^{k-1} omega(1/i) on the range
  std::size_t multiplicity = 1;      // max number of J_j meeting a J_i
  bool all_k_fixed = false;
  json to_json() const;
  std::string csv() const;
};
// disjoint J_i of lengths ell_i with gaps, f the product of fast diffeomorphisms with heights
// C ell^k omega(ell), N_i = ceil(1/(ell_i^{k-1} mu(ell_i)))
std::vector<Interval> disjoint_rungs(const std::vector<double>& ell, double gap_ratio);
TheoremEstResult theorem_est_experiment(const TheoremEstConfig& c);

// ---- phi experiments ----

struct StretchResult {
  Word f;                  // U1 = phi(f) U0
  Interval U0, U1;
  int case_used = 0;
  std::vector<std::string> trace;
};
// component of supp rep(u) containing x, by an outward scan
Interval support_component(const Representation& rep, const Word& u, double x, double tol = 1e-13);
StretchResult stretch(const Phi& phi, Interval U0, long budget = 1000000);

struct LinearGrowthRow {
  std::size_t i = 0;
  double s_minus = 0.0, s_plus = 0.0;
  CoverResult cl;
  double margin_plus = 0.0, margin_minus = 0.0;  // distance past inf L_{i+1}^+ (sup L_{i+1}^-)
  double required = 0.0;                         // (1 - delta0) ell_{i+1}
  bool in_rung = false, margin_ok = false, growth_ok = false;
};
struct LinearGrowthResult {
  StretchResult stretch;
  std::vector<LinearGrowthRow> rows;
  bool pass = false;
  json to_json() const;
  std::string csv() const;
};
LinearGrowthResult linear_growth_experiment(const Phi& phi, std::size_t i_max);

struct SlowProgressRow {
  std::size_t i = 0;
  double point = 0.0;
  CoverResult cd;
  double deficit = 0.0;
};
struct SlowProgressResult {
  std::vector<SlowProgressRow> rows;
  QuartileVerdict verdict;
  double max_deficit = 0.0;
  double hypothesis_A1 = 0.0;  // sup_i N_i (1/i)^{k-1} omega(1/i) with omega the rung modulus
  bool orbit_exit = false;
  json to_json() const;
  std::string csv() const;
};
// deficit i - cd(x, psi(w_i) x) with w_i = v_i^{N_i} w_{i-1}, N taken from psi's ladder
SlowProgressResult slow_progress_experiment(const Phi& psi, double x, std::size_t i_max, double margin = 3.0);

// sup over pairs of |F^(k)(x) - F^(k)(y)| / mu(|x-y|) for pairs drawn inside the rungs
struct RegularityLedger {
  double estimate = 0.0;
  double bound = 0.0;  // 2 K0
  std::size_t pairs = 0;
  json to_json() const;
};
RegularityLedger regularity_ledger(const Phi& phi, char gen, std::size_t pairs, unsigned seed);

// ---- certificates ----

enum class CertVerdict { nontrivial, trivial, inconclusive };
std::string cert_name(CertVerdict v);
struct CommutatorCertificate {
  CertVerdict verdict = CertVerdict::inconclusive;
  double witness = 0.0;
  double displacement = 0.0;
  std::string reason;
  json to_json() const;
};
// [phi(u), phi(h u h^-1)] on a grid over U, a component of supp phi(u)
CommutatorCertificate commutator_certificate(const Phi& phi, const Word& u, const Word& h, Interval U,
                                             std::size_t grid = 1000);

// sup over the grid of |rep(w) x - x|
double displacement_sup(const Representation& rep, const Word& w, const std::vector<double>& grid);
std::vector<double> uniform_grid(Interval I, std::size_t n);

struct KernelStage {
  std::size_t i = 0;
  Word h;
  Word h_prime;
  Interval psi_window;
  double psi_residual = 0.0;
  CommutatorCertificate phi_cert;
};
struct KernelSearchResult {
  bool found = false;
  Word g;
  std::size_t stages = 0;
  std::size_t n_components = 0;  // psi support components meeting supp psi(u_dagger)
  double psi_residual = 0.0;
  double phi_witness = 0.0, phi_displacement = 0.0;
  std::vector<KernelStage> trace;
  std::string reason;
  json to_json() const;
};
struct KernelSearchOptions {
  std::size_t grid = 1000;
  double tol = 1e-8;
  std::size_t i_max = 6;
  std::size_t max_stages = 8;
  long budget = 1000000;
};
KernelSearchResult kernel_element_search(const Phi& phi, const Representation& psi, const Cover& psi_cover,
                                         const KernelSearchOptions& opt = {});

// toy representations for the kernel search
Representation trivial_representation(Interval ambient = {0.0, 1.0});
Representation toy_psi();

// ---- compactification check ----

struct FlatnessReport {
  std::vector<double> h;
  std::vector<std::array<double, 3>> diffs;  // order 0, 1, 2 of Phi(g) - Id at 0
  double worst = 0.0;
  json to_json() const;
};
FlatnessReport compactify_flatness(const MapObject& g, int k, bool at_one = false, std::size_t levels = 8);

// ---- output helpers ----

std::string csv_number(double v);
std::string join_csv(const std::vector<std::string>& cells);

}  // namespace crg
