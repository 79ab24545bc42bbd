#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "critreg/analysis.hpp"

namespace crg {

// ---- rung density ----

std::vector<Interval> disjoint_rungs(const std::vector<double>& ell, double gap_ratio) {
  std::vector<Interval> J;
  double lo = 0.0;
  for (double l : ell) {
    J.push_back({lo, lo + l});
    lo += l * (1.0 + gap_ratio);
  }
  return J;
}

json TheoremEstResult::to_json() const {
  json j;
  j["k"] = config.k;
  j["mu"] = config.mu.descriptor();
  j["omega"] = config.omega.descriptor();
  j["kstar"] = config.kstar;
  j["eps0"] = config.eps0;
  j["delta"] = config.delta;
  j["lambda"] = config.lambda;
  j["i_max"] = config.i_max;
  j["identity"] = config.identity;
  j["hypothesis_sup"] = hypothesis_sup;
  j["multiplicity"] = multiplicity;
  j["all_k_fixed"] = all_k_fixed;
  j["density"] = density.to_json();
  return j;
}

std::string TheoremEstResult::csv() const {
  std::ostringstream o;
  o << "i,ell,N,fastness,expansiveness,fast,expansive,k_fixed,lower_bounds\n";
  for (auto& r : rows)
    o << join_csv({std::to_string(r.i), csv_number(r.ell), std::to_string(r.N), csv_number(r.fastness),
                   csv_number(r.expansiveness), r.fast ? "1" : "0", r.expansive ? "1" : "0", r.k_fixed ? "1" : "0",
                   r.lower_bounds ? "1" : "0"})
      << "\n";
  return o.str();
}

TheoremEstResult theorem_est_experiment(const TheoremEstConfig& c) {
  if (c.i_max < 1) throw std::invalid_argument("theorem_est_experiment: i_max must be positive");
  TheoremEstResult res;
  res.config = c;
  std::vector<double> ell(c.i_max);
  std::vector<long> N(c.i_max);
  for (std::size_t i = 1; i <= c.i_max; ++i) {
    ell[i - 1] = ladder_ell(static_cast<long>(i), c.kstar);
    N[i - 1] = static_cast<long>(std::ceil(1.0 / (std::pow(ell[i - 1], c.k - 1) * c.mu(ell[i - 1])) - 1e-12));
    double inv = 1.0 / static_cast<double>(i);
    res.hypothesis_sup = std::max(res.hypothesis_sup, static_cast<double>(N[i - 1]) * std::pow(inv, c.k - 1) * c.omega(inv));
  }
  auto J = disjoint_rungs(ell, c.gap_ratio);
  MapObject f;
  if (!c.identity) {
    BumpParams hp = BumpParams::make(c.k, c.omega, c.eps0);
    f = build_infinite_product(J, {}, hp, 0.0, true).map;
  }
  std::vector<bool> in(c.i_max, false);
  res.all_k_fixed = true;
  for (std::size_t i = 1; i <= c.i_max; ++i) {
    FastReport r = classify_fastness(f, J[i - 1], N[i - 1], c.grid, c.k, c.delta, c.lambda);
    TheoremEstRow row;
    row.i = i;
    row.ell = ell[i - 1];
    row.N = N[i - 1];
    row.fastness = r.fastness;
    row.expansiveness = r.expansiveness;
    row.fast = r.fastness >= c.delta;
    row.expansive = r.expansiveness >= c.lambda;
    row.k_fixed = r.k_fixed;
    row.lower_bounds = r.early;
    res.all_k_fixed = res.all_k_fixed && r.k_fixed;
    in[i - 1] = row.fast || row.expansive;
    res.rows.push_back(row);
  }
  res.multiplicity = 1;  // the J_i are pairwise disjoint by construction
  res.density = natural_density(in);
  return res;
}

// ---- stretch ----

Interval support_component(const Representation& rep, const Word& u, double x, double tol) {
  auto moved = [&](double p) { return std::abs(rep.act(u, p) - p) > tol * (1.0 + std::abs(p)); };
  if (!moved(x)) throw std::invalid_argument("support_component: the seed point is fixed");
  Interval amb = rep.ambient();
  auto edge = [&](double dir) {
    double in = x, step = 1e-6 * (1.0 + amb.length());
    double out = x;
    for (;;) {
      out = in + dir * step;
      if (dir > 0 && out >= amb.hi) {
        out = amb.hi;
        if (moved(out)) return out;
        break;
      }
      if (dir < 0 && out <= amb.lo) {
        out = amb.lo;
        if (moved(out)) return out;
        break;
      }
      if (!moved(out)) break;
      in = out;
      step *= 1.5;
    }
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (in + out);
      if (mid == in || mid == out) break;
      (moved(mid) ? in : out) = mid;
    }
    return out;
  };
  return {edge(-1.0), edge(1.0)};
}

StretchResult stretch(const Phi& phi, Interval U0, long budget) {
  const auto& rep = phi.rep;
  const auto& cfg = phi.config;
  StretchResult st;
  st.U0 = U0;
  double z1 = U0.lo, z2 = U0.hi;
  const double m = 1e-3;
  const double L1lo = cfg.Lplus(1).lo, ell1 = cfg.ell[1];
  const double target = L1lo + 2.0 * (1.0 - phi.params.delta0) * ell1;

  auto apply = [&](char g, long n) {
    if (n == 0) return;
    z1 = rep.act_power(g, n, z1);
    z2 = rep.act_power(g, n, z2);
    st.f = Word::gen(g, n) * st.f;
    std::ostringstream o;
    o << g << "^" << n << " -> (" << z1 << ", " << z2 << ")";
    st.trace.push_back(o.str());
  };
  // smallest |n| in direction dir with cond after applying g^n
  auto push = [&](char g, long dir, auto cond) {
    long n = 0;
    double a = z1, b = z2;
    while (!cond(a, b)) {
      a = rep.act_power(g, dir, a);
      b = rep.act_power(g, dir, b);
      if (++n > budget) throw BudgetError(std::string("stretch: budget exceeded pushing with ") + g);
    }
    apply(g, dir * n);
  };

  // Case 4: z1 in C+ or D+
  if (z1 >= 1.5 - m) {
    st.case_used = 4;
    if (z1 >= 2.0 - m) push('d', -1, [&](double a, double) { return a < 2.0 - m; });
    push('c', -1, [&](double a, double) { return a < 1.5 - m; });
  }
  // Case 3: z1 in B+ to the right of I0
  if (z1 >= 1.0 - m) {
    if (!st.case_used) st.case_used = 3;
    push('b', -1, [&](double a, double) { return a < 1.0 - m; });
  }
  // Case 2: an endpoint inside I0 away from B-/B+; greedy search in <a,c,d,e>
  if (z1 > -0.5 - m || z2 < 0.5 + m) {
    if (!st.case_used) st.case_used = 2;
    auto deficit = [&](double a, double b) { return std::max(0.0, a + 0.5 + m) + std::max(0.0, 0.5 + m - b); };
    for (int round = 0; round < 64 && deficit(z1, z2) > 0.0; ++round) {
      char best_g = 0;
      long best_n = 0;
      double best = deficit(z1, z2);
      for (char g : std::string("acde"))
        for (long n = -64; n <= 64; ++n) {
          if (n == 0) continue;
          double v = deficit(rep.act_power(g, n, z1), rep.act_power(g, n, z2));
          if (v < best - 1e-15) {
            best = v;
            best_g = g;
            best_n = n;
          }
        }
      if (!best_g) break;
      apply(best_g, best_n);
    }
    if (deficit(z1, z2) > 0.0) throw BudgetError("stretch: no element of <a,c,d,e> spreads U0 across I0");
  }
  if (!st.case_used) st.case_used = 1;
  // Case 1: both endpoints outside I0 minus B; push across B, C, D
  if (z2 < 1.25 + m || z1 > -1.25 - m)
    push('b', 1, [&](double a, double b) { return b >= 1.25 + m && a <= -1.25 - m; });
  if (z2 < 1.75 + m || z1 > -1.75 - m)
    push('c', 1, [&](double a, double b) { return b >= 1.75 + m && a <= -1.75 - m; });
  push('d', 1, [&](double a, double b) { return b > target && a < -target; });
  st.U1 = {z1, z2};
  return st;
}

// ---- linear growth ----

json LinearGrowthResult::to_json() const {
  json j;
  j["stretch_word"] = stretch.f.str();
  j["case"] = stretch.case_used;
  j["U0"] = {stretch.U0.lo, stretch.U0.hi};
  j["U1"] = {stretch.U1.lo, stretch.U1.hi};
  j["rows"] = rows.size();
  j["pass"] = pass;
  return j;
}

std::string LinearGrowthResult::csv() const {
  std::ostringstream o;
  o << "i,s_minus,s_plus,cl,cl_lower_bound,margin_plus,margin_minus,required,in_rung,margin_ok,growth_ok\n";
  for (auto& r : rows)
    o << join_csv({std::to_string(r.i), csv_number(r.s_minus), csv_number(r.s_plus), r.cl.str(),
                   r.cl.lower_bound ? "1" : "0", csv_number(r.margin_plus), csv_number(r.margin_minus),
                   csv_number(r.required), r.in_rung ? "1" : "0", r.margin_ok ? "1" : "0", r.growth_ok ? "1" : "0"})
      << "\n";
  return o.str();
}

LinearGrowthResult linear_growth_experiment(const Phi& phi, std::size_t i_max) {
  const auto& cfg = phi.config;
  if (i_max + 1 > cfg.horizon) throw std::invalid_argument("linear_growth_experiment: i_max + 1 exceeds the horizon");
  LinearGrowthResult res;
  Interval U0 = support_component(phi.rep, phi.u_dagger, phi.x1);
  res.stretch = stretch(phi, U0);
  const double d0 = phi.params.delta0;
  double cap = cfg.Lplus(1).lo + 0.5 * cfg.ell[1];
  double sp = std::min(res.stretch.U1.hi, cap), sm = std::max(res.stretch.U1.lo, -cap);
  res.pass = true;
  for (std::size_t i = 0; i <= i_max; ++i) {
    if (i > 0) {
      char g = ladder_generator(i);
      sp = phi.rep.act_power(g, cfg.N[i], sp);
      sm = phi.rep.act_power(g, cfg.N[i], sm);
    }
    LinearGrowthRow r;
    r.i = i;
    r.s_plus = sp;
    r.s_minus = sm;
    Interval Lp = cfg.Lplus(i + 1), Lm = cfg.Lminus(i + 1);
    r.margin_plus = sp - Lp.lo;
    r.margin_minus = Lm.hi - sm;
    r.required = (1.0 - d0) * cfg.ell[i + 1];
    r.in_rung = Lp.contains(sp) && Lm.contains(sm);
    r.margin_ok = r.margin_plus >= r.required - 1e-9 && r.margin_minus >= r.required - 1e-9;
    r.cl = covering_length(phi.cover, sm, sp);
    r.growth_ok = !r.cl.infinite && r.cl.value > static_cast<long>(2 * i);
    res.pass = res.pass && r.in_rung && r.margin_ok && r.growth_ok;
    res.rows.push_back(r);
  }
  return res;
}

// ---- slow progress ----

json SlowProgressResult::to_json() const {
  json j;
  j["rows"] = rows.size();
  j["verdict"] = verdict.to_json();
  j["max_deficit"] = max_deficit;
  j["hypothesis_A1"] = hypothesis_A1;
  j["orbit_exit"] = orbit_exit;
  return j;
}

std::string SlowProgressResult::csv() const {
  std::ostringstream o;
  o << "i,point,cd,cd_lower_bound,deficit\n";
  for (auto& r : rows)
    o << join_csv({std::to_string(r.i), csv_number(r.point), r.cd.str(), r.cd.lower_bound ? "1" : "0",
                   csv_number(r.deficit)})
      << "\n";
  return o.str();
}

SlowProgressResult slow_progress_experiment(const Phi& psi, double x, std::size_t i_max, double margin) {
  const auto& cfg = psi.config;
  if (i_max + 1 > cfg.horizon) throw std::invalid_argument("slow_progress_experiment: i_max + 1 exceeds the horizon");
  SlowProgressResult res;
  std::vector<double> seq;
  double p = x;
  for (std::size_t i = 1; i <= i_max; ++i) {
    p = psi.rep.act_power(ladder_generator(i), cfg.N[i], p);
    double inv = 1.0 / static_cast<double>(i);
    res.hypothesis_A1 = std::max(res.hypothesis_A1, static_cast<double>(cfg.N[i]) * std::pow(inv, cfg.k - 1) * psi.height_modulus(inv));
    SlowProgressRow r;
    r.i = i;
    r.point = p;
    r.cd = covering_distance(psi.cover, x, p);
    if (r.cd.infinite) {
      res.orbit_exit = true;
      r.deficit = std::nan("");
      res.rows.push_back(r);
      break;
    }
    r.deficit = static_cast<double>(i) - static_cast<double>(r.cd.value);
    seq.push_back(r.deficit);
    res.max_deficit = i == 1 ? r.deficit : std::max(res.max_deficit, r.deficit);
    res.rows.push_back(r);
  }
  res.verdict = quartile_verdict(seq, margin);
  return res;
}

// ---- regularity ledger ----

json RegularityLedger::to_json() const {
  return json{{"estimate", estimate}, {"bound", bound}, {"pairs", pairs}, {"ratio", estimate / bound}};
}

RegularityLedger regularity_ledger(const Phi& phi, char gen, std::size_t pairs, unsigned seed) {
  const auto& cfg = phi.config;
  const int k = cfg.k;
  const MapObject& F = phi.rep.gen(gen);
  std::vector<std::size_t> rungs;
  for (std::size_t i = 1; i <= cfg.horizon; ++i)
    if (ladder_generator(i) == gen) rungs.push_back(i);
  if (rungs.empty()) throw std::invalid_argument("regularity_ledger: generator carries no rungs");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, rungs.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RegularityLedger r;
  r.bound = 2.0 * phi.params.K0;
  r.pairs = pairs;
  for (std::size_t s = 0; s < pairs; ++s) {
    Interval L = cfg.Lplus(rungs[pick(rng)]);
    if (unit(rng) < 0.5) L = {-L.hi, -L.lo};
    double x = L.lo + unit(rng) * L.length();
    double y;
    if (s % 10 == 9) {
      // pair across two rungs
      Interval M = cfg.Lplus(rungs[pick(rng)]);
      y = M.lo + unit(rng) * M.length();
    } else {
      double t = L.length() * std::pow(10.0, -9.0 * unit(rng));
      y = x + (unit(rng) < 0.5 ? -t : t);
    }
    if (x == y) continue;
    double dx = eval_derivative(F, x, k), dy = eval_derivative(F, y, k);
    double ratio = std::abs(dx - dy) / phi.params.mu(std::abs(x - y));
    r.estimate = std::max(r.estimate, ratio);
  }
  return r;
}

// ---- kernel search ----

json KernelSearchResult::to_json() const {
  json st = json::array();
  for (auto& s : trace)
    st.push_back({{"i", s.i}, {"h", s.h.str()}, {"h_prime", s.h_prime.str()}, {"psi_window", {s.psi_window.lo, s.psi_window.hi}},
                  {"psi_residual", s.psi_residual}, {"phi_certificate", s.phi_cert.to_json()}});
  return json{{"found", found},
              {"stages", stages},
              {"n_components", n_components},
              {"word_letters", g.letter_count()},
              {"psi_residual", psi_residual},
              {"phi_witness", phi_witness},
              {"phi_displacement", phi_displacement},
              {"reason", reason},
              {"trace", st}};
}

namespace {

std::vector<Interval> cover_components(const Cover& c) {
  std::vector<Interval> out;
  for (auto& it : c.items()) {
    if (!out.empty() && it.iv.lo < out.back().hi) out.back().hi = std::max(out.back().hi, it.iv.hi);
    else out.push_back(it.iv);
  }
  return out;
}

}  // namespace

KernelSearchResult kernel_element_search(const Phi& phi, const Representation& psi, const Cover& psi_cover,
                                         const KernelSearchOptions& opt) {
  KernelSearchResult res;
  const auto& cfg = phi.config;
  Word u = phi.u_dagger;
  auto psi_grid = uniform_grid(psi.ambient(), opt.grid);
  auto comps = cover_components(psi_cover);
  {
    std::vector<bool> meets(comps.size(), false);
    for (double p : psi_grid)
      if (std::abs(psi.act(u, p) - p) > opt.tol)
        for (std::size_t j = 0; j < comps.size(); ++j)
          if (comps[j].contains(p)) meets[j] = true;
    res.n_components = static_cast<std::size_t>(std::count(meets.begin(), meets.end(), true));
  }
  Interval U_phi = support_component(phi.rep, u, phi.x1);
  res.phi_witness = phi.x1;
  res.phi_displacement = std::abs(phi.rep.act(u, phi.x1) - phi.x1);

  for (std::size_t stage = 0;; ++stage) {
    res.psi_residual = displacement_sup(psi, u, psi_grid);
    if (res.psi_residual < opt.tol) {
      res.g = u;
      res.stages = stage;
      res.found = res.phi_displacement > opt.tol;
      res.reason = res.found ? "psi(g) = Id on the grid, phi(g) moves the witness" : "phi(g) not certified";
      return res;
    }
    if (stage >= opt.max_stages) {
      res.reason = "stage budget exceeded";
      res.g = u;
      res.stages = stage;
      return res;
    }
    StretchResult st = stretch(phi, U_phi, opt.budget);
    Word up = st.f * u * st.f.inverse();
    // first psi support component meeting supp psi(u')
    double x = 0.0, y = 0.0;
    Interval W{};
    bool have = false;
    double step = psi.ambient().length() / static_cast<double>(opt.grid);
    for (double p : psi_grid) {
      if (std::abs(psi.act(up, p) - p) <= 1e-13) continue;
      auto it = std::find_if(comps.begin(), comps.end(), [p](const Interval& c) { return c.contains(p); });
      if (it == comps.end()) continue;
      if (!have) {
        W = *it;
        x = p;
        have = true;
      }
      if (W == *it) y = p;
    }
    if (!have) {
      res.reason = "supp psi(u') not found on the grid";
      return res;
    }
    x = std::max(x - step, 0.5 * (W.lo + x));
    y = std::min(y + step, 0.5 * (W.hi + y));
    // the grid misses support accumulating at the ends of W; probe geometrically toward them
    for (int j = 1; j <= 60; ++j) {
      double q = W.lo + (x - W.lo) * std::ldexp(1.0, -j);
      if (q <= W.lo) break;
      if (std::abs(psi.act(up, q) - q) > 1e-13) x = W.lo + (q - W.lo) * 0.5, j = 0;
    }
    for (int j = 1; j <= 60; ++j) {
      double q = W.hi - (W.hi - y) * std::ldexp(1.0, -j);
      if (q >= W.hi) break;
      if (std::abs(psi.act(up, q) - q) > 1e-13) y = W.hi - (W.hi - q) * 0.5, j = 0;
    }
    auto W_grid = uniform_grid(W, opt.grid);

    bool advanced = false;
    Word w;
    for (std::size_t i = 1; i <= opt.i_max && !advanced; ++i) {
      if (i + 1 > cfg.horizon) break;
      w = Word::gen(ladder_generator(i), cfg.N[i]) * w;
      Word A = w * up * w.inverse();
      Interval Ui{phi.rep.act(w, st.U1.lo), phi.rep.act(w, st.U1.hi)};
      double wx = psi.act(w, x), wy = psi.act(w, y);
      Word h;
      try {
        h = slide(psi, minimal_chain(psi_cover, wx, wy), opt.budget);
      } catch (const std::exception&) {
        continue;
      }
      if (syllable_length(h) >= static_cast<long>(2 * i)) continue;
      std::vector<Word> cands = {h, Word::gen('a') * h, Word::gen('a', -1) * h, Word::gen('b') * h, Word::gen('b', -1) * h};
      for (auto& hp : cands) {
        Word cand = commutator(A, hp * A * hp.inverse());
        double rW = displacement_sup(psi, cand, W_grid);
        if (rW >= opt.tol) continue;
        CommutatorCertificate cert = commutator_certificate(phi, A, hp, Ui);
        if (cert.verdict != CertVerdict::nontrivial) continue;
        res.trace.push_back({i, h, hp, W, rW, cert});
        u = cand;
        res.phi_witness = cert.witness;
        res.phi_displacement = cert.displacement;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      res.reason = "no admissible h found up to i_max";
      res.g = u;
      res.stages = stage;
      return res;
    }
    // the next stage only needs a component when psi(u) is still nontrivial
    if (displacement_sup(psi, u, psi_grid) >= opt.tol) U_phi = support_component(phi.rep, u, res.phi_witness);
  }
}

}  // namespace crg
