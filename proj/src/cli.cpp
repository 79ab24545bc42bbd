#include "critreg/cli.hpp"

#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "critreg/analysis.hpp"
#include "critreg/tricks.hpp"

namespace crg::cli {

namespace {

struct Common {
  int k = 2;
  std::string mu = "power:0.5";
  long kstar = 10;
  double eps0 = 1e-3;
  std::size_t horizon = 60;
  std::size_t imax = 10;
  std::size_t grid = 1000;
  unsigned seed = 1;
  long budget = 1000000;
  std::string out;
  bool dry_run = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* s, Common& c) {
  s->add_option("--k", c.k, "regularity order")->capture_default_str();
  s->add_option("--mu", c.mu, "modulus: power:<tau> | complex:<tau>,<s> | lip")->capture_default_str();
  s->add_option("--kstar", c.kstar, "ladder offset K*")->capture_default_str();
  s->add_option("--eps0", c.eps0, "epsilon_0")->capture_default_str();
  s->add_option("--horizon", c.horizon, "number of ladder rungs built")->capture_default_str();
  s->add_option("--imax", c.imax, "last index of the experiment")->capture_default_str();
  s->add_option("--grid", c.grid, "sample grid size")->capture_default_str();
  s->add_option("--seed", c.seed, "random seed")->capture_default_str();
  s->add_option("--budget", c.budget, "search budget")->capture_default_str();
  s->add_option("--out", c.out, "output directory for CSV and JSON");
  s->add_flag("--dry-run", c.dry_run, "print the derived constants and stop");
}

Modulus parse_mu(const std::string& s) {
  try {
    return Modulus::parse(s);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad modulus '") + s + "': " + e.what());
  }
}

json params_json(const Common& c) {
  json j;
  j["k"] = c.k;
  j["mu"] = c.mu;
  j["kstar"] = c.kstar;
  j["eps0"] = c.eps0;
  j["horizon"] = c.horizon;
  j["imax"] = c.imax;
  j["grid"] = c.grid;
  j["seed"] = c.seed;
  j["budget"] = c.budget;
  return j;
}

json constants_json(const Common& c) {
  json j;
  BumpParams p = BumpParams::make(c.k, parse_mu(c.mu), c.eps0);
  j["bump"] = p.to_json();
  try {
    LadderConfig cfg = build_ladder(c.k, p.mu, c.kstar, c.horizon, c.eps0);
    j["kappa"] = cfg.kappa;
    json ell = json::array(), N = json::array();
    for (std::size_t i = 1; i < cfg.ell.size() && i <= 10; ++i) {
      ell.push_back(cfg.ell[i]);
      N.push_back(cfg.N[i]);
    }
    j["ell_prefix"] = ell;
    j["N_prefix"] = N;
    j["horizon_interval"] = {cfg.horizon_interval().lo, cfg.horizon_interval().hi};
  } catch (const std::exception& e) {
    j["ladder_error"] = e.what();
  }
  return j;
}

Phi make_phi(const Common& c) {
  Modulus mu = parse_mu(c.mu);
  BumpParams p = BumpParams::make(c.k, mu, c.eps0);
  return build_phi(build_ladder(c.k, mu, c.kstar, c.horizon, c.eps0), p);
}

// prefix every CSV line with a run label
std::string label_csv(const std::string& label, const std::string& csv, bool header) {
  std::istringstream in(csv);
  std::ostringstream o;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      if (header) o << "run," << line << "\n";
      first = false;
      continue;
    }
    o << label << "," << line << "\n";
  }
  return o.str();
}

struct Report {
  json params;
  json result;
  std::string csv;
  std::optional<bool> pass;
};

int emit(const std::string& name, const Common& c, Report r) {
  json m;
  m["subcommand"] = name;
  m["version"] = kVersion;
  m["params"] = r.params;
  json outputs = json::array();
  std::filesystem::path dir(c.out);
  if (!c.out.empty()) {
    if (!r.csv.empty()) outputs.push_back((dir / (name + ".csv")).string());
    outputs.push_back((dir / (name + ".json")).string());
  }
  m["outputs"] = outputs;
  m["verdict"] = !r.pass ? "none" : (*r.pass ? "pass" : "fail");
  m["result"] = r.result;
  if (c.out.empty()) {
    if (!r.csv.empty()) std::cout << r.csv;
    std::cout << m.dump(2) << "\n";
  } else {
    std::filesystem::create_directories(dir);
    if (!r.csv.empty()) std::ofstream(dir / (name + ".csv"), std::ios::binary) << r.csv;
    std::ofstream(dir / (name + ".json"), std::ios::binary) << m.dump(2) << "\n";
    std::cout << name << ": " << m["verdict"].get<std::string>() << "\n";
    for (auto& p : outputs) std::cout << "  " << p.get<std::string>() << "\n";
  }
  return !r.pass || *r.pass ? kPass : kFail;
}

// ---- subcommands ----

Report build_phi_cmd(const Common& c) {
  Phi phi = make_phi(c);
  const auto& rep = phi.rep;
  auto grid = uniform_grid(rep.ambient(), c.grid);
  Report r;
  r.params = params_json(c);
  json res;
  double worst = 0.0;
  auto check = [&](const std::string& key, const Word& w1, const Word& w2) {
    double v = relator_residual(rep, w1, w2, grid);
    res["residuals"][key] = v;
    worst = std::max(worst, v);
  };
  check("a e a^-1 = e^2", Word::parse("a e a^-1"), Word::parse("e^2"));
  check("[c,a]", Word::parse("c a"), Word::parse("a c"));
  check("[c,e]", Word::parse("c e"), Word::parse("e c"));
  const std::string gens = "abcde";
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!sets_disjoint(rep.gen(gens[i]).support(), rep.gen(gens[j]).support())) continue;
      std::string x(1, gens[i]), y(1, gens[j]);
      check("[" + x + "," + y + "]", Word::parse(x + " " + y), Word::parse(y + " " + x));
    }
  res["worst_residual"] = worst;
  res["x1"] = phi.x1;
  res["ambient"] = {rep.ambient().lo, rep.ambient().hi};
  res["cover_items"] = phi.cover.items().size();
  res["config"] = phi.config.to_json();
  std::ostringstream o;
  o << "i,generator,ell,N,L_lo,L_hi,height,coarse\n";
  for (std::size_t i = 1; i < phi.rungs.size(); ++i) {
    const auto& f = phi.rungs[i];
    o << join_csv({std::to_string(i), std::string(1, ladder_generator(i)), csv_number(phi.config.ell[i]),
                   std::to_string(phi.config.N[i]), csv_number(f.J.lo), csv_number(f.J.hi), csv_number(f.height),
                   f.coarse ? "1" : "0"})
      << "\n";
  }
  r.result = res;
  r.csv = o.str();
  r.pass = worst < 1e-9;
  return r;
}

Report verify_fast_cmd(const Common& c, double tol) {
  Phi phi = make_phi(c);
  const auto& cfg = phi.config;
  if (c.imax > cfg.horizon) throw UsageError("--imax exceeds --horizon");
  Report r;
  r.params = params_json(c);
  r.params["tol"] = tol;
  double need = phi.params.delta0 - tol, worst = 1e300;
  bool ok = true;
  std::ostringstream o;
  o << "i,generator,ell,N,fast_plus,fast_minus,coarse,pass\n";
  for (std::size_t i = 1; i <= c.imax; ++i) {
    const MapObject& f = phi.rep.gen(ladder_generator(i));
    FastReport p = measure_fastness(f, cfg.Lplus(i), cfg.N[i], c.grid, c.k);
    FastReport m = measure_fastness(f, cfg.Lminus(i), cfg.N[i], c.grid, c.k);
    bool row = p.fastness >= need && m.fastness >= need;
    ok = ok && row;
    worst = std::min({worst, p.fastness, m.fastness});
    o << join_csv({std::to_string(i), std::string(1, ladder_generator(i)), csv_number(cfg.ell[i]),
                   std::to_string(cfg.N[i]), csv_number(p.fastness), csv_number(m.fastness),
                   phi.rungs[i].coarse ? "1" : "0", row ? "1" : "0"})
      << "\n";
  }
  r.result = {{"delta0", phi.params.delta0}, {"required", need}, {"worst_fastness", worst}};
  r.csv = o.str();
  r.pass = ok;
  return r;
}

Report verify_bump_cmd(const Common& c, std::size_t pairs, double slack) {
  Phi phi = make_phi(c);
  const BumpParams& p = phi.params;
  Report r;
  r.params = params_json(c);
  r.params["pairs"] = pairs;
  r.params["slack"] = slack;
  bool ok = true;
  json res;
  res["bump"] = p.to_json();
  for (char g : {'a', 'b'}) {
    RegularityLedger led = regularity_ledger(phi, g, pairs, c.seed + (g == 'b' ? 1u : 0u));
    bool row = led.estimate <= led.bound * (1.0 + slack);
    ok = ok && row;
    json j = led.to_json();
    j["pass"] = row;
    res["ledger"][std::string(1, g)] = j;
  }
  std::ostringstream o;
  o << "ell,height,designed,midpoint_displacement,max_slope,pass\n";
  for (double ell : {p.ell0star, p.ell0star / 4.0, p.ell0star / 16.0}) {
    FastDiffeo fd = build_fast_diffeo({0.0, ell}, p);
    double designed = p.C * std::pow(ell, p.k) * p.mu(ell);
    double mid = fd.map.eval(0.5 * ell) - 0.5 * ell;
    double slope = derivative_deviation(fd.map, fd.J, 1, c.grid);
    // (x + H) - x loses the digits of H below the ulp of x
    double tol = 1e-9 * designed + 8.0 * std::numeric_limits<double>::epsilon() * ell;
    bool row = std::abs(mid - designed) <= tol && slope < 1.0;
    ok = ok && row;
    o << join_csv({csv_number(ell), csv_number(fd.height), csv_number(designed), csv_number(mid), csv_number(slope),
                   row ? "1" : "0"})
      << "\n";
  }
  r.result = res;
  r.csv = o.str();
  r.pass = ok;
  return r;
}

Report covering_cmd(const Common& c, std::optional<double> x, std::optional<double> y) {
  Phi phi = make_phi(c);
  double a = x.value_or(-phi.config.Lplus(3).hi), b = y.value_or(phi.config.Lplus(3).hi);
  if (!(a < b)) throw UsageError("--x must be below --y");
  Report r;
  r.params = params_json(c);
  r.params["x"] = a;
  r.params["y"] = b;
  CoverResult cl = covering_length(phi.cover, a, b);
  CoverResult cd = covering_distance(phi.cover, a, b);
  json res{{"cl", cl.str()}, {"cd", cd.str()}};
  std::ostringstream o;
  o << "position,generator,component,lo,hi\n";
  try {
    ChainWitness w = minimal_chain(phi.cover, a, b);
    for (std::size_t i = 0; i < w.chain.size(); ++i)
      o << join_csv({std::to_string(i), std::string(1, w.chain[i].gen), std::to_string(w.chain[i].index),
                     csv_number(w.chain[i].iv.lo), csv_number(w.chain[i].iv.hi)})
        << "\n";
    res["chain_length"] = w.chain.size();
  } catch (const std::exception& e) {
    res["chain_error"] = e.what();
  }
  r.result = res;
  r.csv = o.str();
  return r;
}

Report linear_growth_cmd(const Common& c) {
  Phi phi = make_phi(c);
  if (c.imax + 1 > phi.config.horizon) throw UsageError("--horizon must exceed --imax");
  LinearGrowthResult lg = linear_growth_experiment(phi, c.imax);
  Report r;
  r.params = params_json(c);
  r.result = lg.to_json();
  r.csv = lg.csv();
  r.pass = lg.pass;
  return r;
}

Report slow_progress_cmd(const Common& c, const std::string& omega, double margin, double matched_max) {
  Modulus mu = parse_mu(c.mu), om = parse_mu(omega);
  BumpParams p = BumpParams::make(c.k, mu, c.eps0);
  LadderConfig cfg = build_ladder(c.k, mu, c.kstar, c.horizon, c.eps0);
  if (c.imax + 2 > cfg.horizon) throw UsageError("--horizon must exceed --imax + 1");
  Phi phi = build_phi(cfg, p);
  Phi psi = build_phi(cfg, p, &om);
  double x = cfg.Lplus(1).lo + 0.5 * cfg.ell[1];
  SlowProgressResult matched = slow_progress_experiment(phi, x, c.imax, margin);
  SlowProgressResult contrast = slow_progress_experiment(psi, x, c.imax, margin);
  Report r;
  r.params = params_json(c);
  r.params["omega"] = omega;
  r.params["margin"] = margin;
  r.params["matched_max"] = matched_max;
  r.params["x"] = x;
  r.result = {{"matched", matched.to_json()}, {"contrast", contrast.to_json()}};
  r.csv = label_csv("matched", matched.csv(), true) + label_csv("contrast", contrast.csv(), false);
  r.pass = contrast.verdict.diverging && matched.max_deficit <= matched_max;
  return r;
}

Report density_cmd(const Common& c, const std::string& set, long N, long window, std::optional<double> max,
                   std::optional<double> min) {
  Predicate A;
  try {
    A = named_set(set);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (window > 0) A = window_set(A, window);
  if (N < 1) throw UsageError("--N must be positive");
  DensityEstimate d = natural_density(A, N);
  Report r;
  r.params = params_json(c);
  r.params["set"] = set;
  r.params["N"] = N;
  r.params["window"] = window;
  if (max) r.params["max"] = *max;
  if (min) r.params["min"] = *min;
  r.result = d.to_json();
  std::ostringstream o;
  o << "N,count,ratio\n";
  for (std::size_t i = 0; i < d.N.size(); ++i)
    o << join_csv({std::to_string(d.N[i]), std::to_string(d.count[i]), csv_number(d.ratio[i])}) << "\n";
  r.csv = o.str();
  std::cerr << "ratio: " << csv_number(d.final_ratio()) << "\n";
  if (max || min) r.pass = (!max || d.final_ratio() <= *max) && (!min || d.final_ratio() >= *min);
  return r;
}

Report theorem_est_cmd(const Common& c, const std::string& omega, const std::string& mode, double delta,
                       double lambda, double max_density, double min_density) {
  if (mode != "both" && mode != "contrast" && mode != "matched") throw UsageError("--mode: both|contrast|matched");
  TheoremEstConfig tc;
  tc.k = c.k;
  tc.mu = parse_mu(c.mu);
  tc.omega = parse_mu(omega);
  tc.kstar = c.kstar;
  tc.eps0 = c.eps0;
  tc.delta = delta;
  tc.lambda = lambda;
  tc.i_max = c.imax;
  tc.grid = c.grid;
  Report r;
  r.params = params_json(c);
  r.params["omega"] = omega;
  r.params["mode"] = mode;
  r.params["delta"] = delta;
  r.params["lambda"] = lambda;
  r.params["max_density"] = max_density;
  r.params["min_density"] = min_density;
  bool ok = true;
  bool header = true;
  if (mode != "matched") {
    TheoremEstResult t = theorem_est_experiment(tc);
    bool pass = t.density.final_ratio() <= max_density;
    ok = ok && pass;
    r.result["contrast"] = t.to_json();
    r.result["contrast"]["pass"] = pass;
    r.csv += label_csv("contrast", t.csv(), header);
    header = false;
  }
  if (mode != "contrast") {
    tc.omega = tc.mu;
    TheoremEstResult t = theorem_est_experiment(tc);
    bool pass = t.density.final_ratio() >= min_density;
    ok = ok && pass;
    r.result["matched"] = t.to_json();
    r.result["matched"]["pass"] = pass;
    r.csv += label_csv("matched", t.csv(), header);
  }
  r.pass = ok;
  return r;
}

Report kernel_search_cmd(const Common& c, const std::string& which, double tol) {
  Representation psi;
  if (which == "trivial")
    psi = trivial_representation();
  else if (which == "toy")
    psi = toy_psi();
  else
    throw UsageError("--psi: trivial|toy");
  Phi phi = make_phi(c);
  KernelSearchOptions opt;
  opt.grid = c.grid;
  opt.tol = tol;
  opt.i_max = c.imax;
  opt.budget = c.budget;
  KernelSearchResult k = kernel_element_search(phi, psi, Cover::from_representation(psi), opt);
  Report r;
  r.params = params_json(c);
  r.params["psi"] = which;
  r.params["tol"] = tol;
  r.result = k.to_json();
  r.result["word"] = k.g.str();
  r.result["stage_bound"] = k.n_components + 1;
  r.pass = k.found && k.stages <= k.n_components + 1;
  return r;
}

Report compactify_cmd(const Common& c, double tol, std::size_t levels, bool at_one) {
  MapObject g = polynomial_map({0.0, 1.25, -0.25}, 0.0, 1.0);  // x + x(1-x)/4
  FlatnessReport f = compactify_flatness(g, c.k, at_one, levels);
  Report r;
  r.params = params_json(c);
  r.params["tol"] = tol;
  r.params["levels"] = levels;
  r.params["at_one"] = at_one;
  r.result = f.to_json();
  std::ostringstream o;
  o << "h,order0,order1,order2\n";
  for (std::size_t i = 0; i < f.h.size(); ++i)
    o << join_csv({csv_number(f.h[i]), csv_number(f.diffs[i][0]), csv_number(f.diffs[i][1]), csv_number(f.diffs[i][2])})
      << "\n";
  r.csv = o.str();
  r.pass = f.worst < tol;
  return r;
}

Report chain_trick_cmd(const Common& c, double x, int depth) {
  ThompsonPL t = build_thompson_pl();
  ChainTrick ct = chain_group_trick(t.x0);
  OrbitCoverage oc = orbit_windows(ct.ustar, Dyadic::from_double(x), depth, static_cast<std::size_t>(c.budget));
  Report r;
  r.params = params_json(c);
  r.params["x"] = x;
  r.params["depth"] = depth;
  r.result = {{"relators_hold", t.relators_hold},
              {"chain", ct.chain},
              {"t0", ct.t0.to_double()},
              {"windows_hit", oc.windows_hit},
              {"windows", oc.windows},
              {"steps", oc.steps},
              {"complete", oc.complete}};
  std::ostringstream o;
  o << "j,lo,hi\n";
  for (std::size_t j = 0; j < ct.hulls.size(); ++j)
    o << join_csv({std::to_string(j), csv_number(ct.hulls[j].lo), csv_number(ct.hulls[j].hi)}) << "\n";
  r.csv = o.str();
  r.pass = t.relators_hold && ct.chain && oc.complete;
  return r;
}

int word_cmd(const std::string& normal, const std::string& ident, const std::string& syl, const std::string& ab) {
  if (normal.empty() && ident.empty() && syl.empty() && ab.empty())
    throw UsageError("word: give --normalize, --identity, --syllable or --abelianize");
  auto parse = [](const std::string& s) {
    try {
      return Word::parse(s);
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad word: ") + e.what());
    }
  };
  if (!normal.empty()) std::cout << "normal form: " << normalize(parse(normal)).str() << "\n";
  if (!ident.empty()) std::cout << "identity: " << (is_identity(parse(ident)) ? "true" : "false") << "\n";
  if (!syl.empty()) std::cout << "syllable length: " << syllable_length(parse(syl)) << "\n";
  if (!ab.empty()) {
    auto v = abelianization(parse(ab));
    std::cout << "abelianization: (" << v[0] << ", " << v[1] << ", " << v[2] << ", " << v[3] << ")\n";
  }
  return kPass;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Interval diffeomorphisms of prescribed regularity: builders and experiments"};
  app.set_config("--config", "", "TOML/INI file of option defaults; flags override it");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::deque<Common> commons;
  std::map<CLI::App*, std::pair<Common*, std::function<int(const Common&)>>> handlers;
  auto sub = [&](const std::string& name, const std::string& help, Common defaults) {
    CLI::App* s = app.add_subcommand(name, help);
    commons.push_back(defaults);
    add_common(s, commons.back());
    return s;
  };
  auto bind = [&](CLI::App* s, std::function<Report(const Common&)> f) {
    handlers[s] = {&commons.back(), [s, f](const Common& c) { return emit(s->get_name(), c, f(c)); }};
  };

  Common d;
  CLI::App* s = sub("build-phi", "build phi and check relator residuals", d);
  bind(s, build_phi_cmd);

  Common df = d;
  df.imax = 40;
  df.grid = 512;
  double fast_tol = 1e-6;
  s = sub("verify-fast", "fastness of phi(v_i^N_i) on the rungs", df);
  s->add_option("--tol", fast_tol, "allowed shortfall below delta0")->capture_default_str();
  bind(s, [&](const Common& c) { return verify_fast_cmd(c, fast_tol); });

  std::size_t pairs = 100000;
  double slack = 0.05;
  s = sub("verify-bump", "bump heights, slopes and the regularity ledger", d);
  s->add_option("--pairs", pairs, "sampled pairs per generator")->capture_default_str();
  s->add_option("--slack", slack, "relative slack over 2 K0")->capture_default_str();
  bind(s, [&](const Common& c) { return verify_bump_cmd(c, pairs, slack); });

  std::optional<double> cx, cy;
  s = sub("covering", "covering length and distance for the cover of phi", d);
  s->add_option("--x", cx, "left end");
  s->add_option("--y", cy, "right end");
  bind(s, [&](const Common& c) { return covering_cmd(c, cx, cy); });

  s = sub("linear-growth", "cl(phi(w_i) U1) > 2i", d);
  bind(s, linear_growth_cmd);

  Common ds = d;
  ds.mu = "power:0.3";
  ds.kstar = 20;
  ds.horizon = 215;
  ds.imax = 200;
  std::string sp_omega = "power:0.6";
  double sp_margin = 3.0, sp_matched = 2.0;
  s = sub("slow-progress", "deficit i - cd(x, psi(w_i) x), matched and contrast", ds);
  s->add_option("--omega", sp_omega, "regularity of the contrast map")->capture_default_str();
  s->add_option("--margin", sp_margin, "quartile margin")->capture_default_str();
  s->add_option("--matched-max", sp_matched, "largest matched deficit allowed")->capture_default_str();
  bind(s, [&](const Common& c) { return slow_progress_cmd(c, sp_omega, sp_margin, sp_matched); });

  std::string dset = "evens";
  long dN = 1000000, dwin = 0;
  std::optional<double> dmax, dmin;
  s = sub("density", "natural density of a named set", d);
  s->add_option("--set", dset, "evens|odds|squares|nonsquares|all|none|multiples:<m>")->capture_default_str();
  s->add_option("--N", dN, "last N")->capture_default_str();
  s->add_option("--window", dwin, "replace A by {i : i + [s] in A}")->capture_default_str();
  s->add_option("--max", dmax, "fail above this ratio");
  s->add_option("--min", dmin, "fail below this ratio");
  bind(s, [&](const Common& c) { return density_cmd(c, dset, dN, dwin, dmax, dmin); });

  Common dt = ds;
  dt.imax = 500;
  dt.grid = 256;
  std::string te_omega = "power:0.6", te_mode = "both";
  double te_delta = 0.5, te_lambda = 1.0, te_max = 0.2, te_min = 0.9;
  s = sub("theorem-est", "density of fast or expansive rungs", dt);
  s->add_option("--omega", te_omega, "regularity of the contrast map")->capture_default_str();
  s->add_option("--mode", te_mode, "both|contrast|matched")->capture_default_str();
  s->add_option("--delta", te_delta, "fastness threshold")->capture_default_str();
  s->add_option("--lambda", te_lambda, "expansiveness threshold")->capture_default_str();
  s->add_option("--max-density", te_max, "contrast density bound")->capture_default_str();
  s->add_option("--min-density", te_min, "matched density bound")->capture_default_str();
  bind(s, [&](const Common& c) { return theorem_est_cmd(c, te_omega, te_mode, te_delta, te_lambda, te_max, te_min); });

  Common dk = d;
  dk.imax = 6;
  std::string ks_psi = "toy";
  double ks_tol = 1e-8;
  s = sub("kernel-search", "element of ker psi outside ker phi", dk);
  s->add_option("--psi", ks_psi, "trivial|toy")->capture_default_str();
  s->add_option("--tol", ks_tol, "identity tolerance for psi")->capture_default_str();
  bind(s, [&](const Common& c) { return kernel_search_cmd(c, ks_psi, ks_tol); });

  double cf_tol = 1e-4;
  std::size_t cf_levels = 8;
  bool cf_one = false;
  s = sub("compactify-check", "flatness of the compactified x + x(1-x)/4", d);
  s->add_option("--tol", cf_tol, "bound on the finite differences")->capture_default_str();
  s->add_option("--levels", cf_levels, "geometric levels")->capture_default_str();
  s->add_flag("--at-one", cf_one, "check the endpoint 1 instead of 0");
  bind(s, [&](const Common& c) { return compactify_cmd(c, cf_tol, cf_levels, cf_one); });

  Common dc = d;
  dc.budget = 100000;
  double ch_x = 0.3;
  int ch_depth = 6;
  s = sub("chain-trick", "chain of supports and orbit coverage for the toy G", dc);
  s->add_option("--x", ch_x, "orbit seed")->capture_default_str();
  s->add_option("--depth", ch_depth, "windows of width 2^-depth")->capture_default_str();
  bind(s, [&](const Common& c) { return chain_trick_cmd(c, ch_x, ch_depth); });

  std::string w_norm, w_id, w_syl, w_ab;
  s = sub("word", "exact algebra of words over a,b,c,d,e", d);
  s->add_option("--normalize", w_norm, "print the normal form");
  s->add_option("--identity", w_id, "decide whether the word is trivial");
  s->add_option("--syllable", w_syl, "syllable length");
  s->add_option("--abelianize", w_ab, "exponent sums of a, b, c, d");
  handlers[s] = {&commons.back(), [&](const Common&) { return word_cmd(w_norm, w_id, w_syl, w_ab); }};

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  for (auto& [app_ptr, h] : handlers) {
    if (!app_ptr->parsed()) continue;
    const Common& c = *h.first;
    try {
      if (c.dry_run) {
        json j;
        j["subcommand"] = app_ptr->get_name();
        j["version"] = kVersion;
        j["params"] = params_json(c);
        j["constants"] = constants_json(c);
        std::cout << j.dump(2) << "\n";
        return kPass;
      }
      return h.second(c);
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << "\n\n" << app_ptr->help();
      return kUsage;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kFail;
    }
  }
  return kUsage;
}

}  // namespace crg::cli
