// Finite propagation speed, phase convexity, principal symbol and elliptic weight experiments.

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <numbers>
#include <sstream>

#include "common.hpp"
#include "cuspwave/bumps.hpp"
#include "cuspwave/errors.hpp"
#include "cuspwave/experiments.hpp"
#include "cuspwave/semiclassics.hpp"

namespace cuspwave {

using detail::Stopwatch;

namespace {

// a <= b up to relative slack, with an absolute floor for roundoff-level values
bool no_larger(double b, double a, double rel = 0.05, double floor = 1e-13) {
  return b <= a * (1.0 + rel) + floor;
}

}  // namespace

// ---- finite propagation speed ----------------------------------------------

ExperimentReport exp_finite_speed(const WarpProfile& profile, const std::vector<double>& h_list,
                                  const std::vector<double>& L_list, double t0, const ExperimentContext& ctx) {
  Stopwatch sw;
  const double r1 = ctx.get("r1", profile.r0() + 1.0);
  const double delta = ctx.get("delta", 0.4);
  const double c = ctx.get("c", 4.0);
  const double extra = ctx.get("rmax_extra", 2.0);
  const double eps_max = ctx.get("eps_max", 0.5);
  const double tol = ctx.get("mass_tol", 1e-3);
  if (!(r1 - 2.0 * delta > profile.r0())) throw PreconditionError("finite_speed needs r1 - 2 delta > r0");
  if (h_list.empty() || L_list.empty()) throw PreconditionError("finite_speed needs h and L values");
  ExperimentReport rep;
  rep.name = "finite_speed";
  detail::set_profile(rep, profile);
  rep.parameters = {{"h_list", h_list}, {"L_list", L_list},        {"t0", {t0}},           {"r1", {r1}},
                    {"delta", {delta}}, {"c", {c}},                {"rmax_extra", {extra}}, {"eps_max", {eps_max}}};

  struct Job {
    double L, h;
  };
  std::vector<Job> jobs;
  for (double L : L_list) {
    for (double h : h_list) jobs.push_back({L, h});
  }
  // outside mass: [initial, wave, schrodinger]
  std::vector<std::array<double, 3>> mass(jobs.size());
  std::vector<double> mu_used(jobs.size());
  parallel_for(jobs.size(), ctx.jobs, [&](std::size_t ij) {
    const double L = jobs[ij].L;
    const double h = jobs[ij].h;
    const double a = r1 + L;
    const double b = r1 + L + 1.0;
    const RadialGrid grid = RadialGrid::with_step(profile.r0(), b + extra, h / c);
    // one mu for every L: the largest available one keeping the outermost shell well inside the allowed region
    const double b_far = r1 + *std::max_element(L_list.begin(), L_list.end()) + 1.0;
    const std::vector<Mode> cand = modes_up_to(ctx.manifold, eps_max * std::exp(-profile.phi(b_far)) / h);
    const double mu = cand.back().mu;
    mu_used[ij] = mu;
    const EigenSystem es = eigendecompose(discretize(profile, mu, grid),
                                          SpectralWindow{bumps::kSpecLo / (h * h), bumps::kSpecHi / (h * h)});
    Eigen::VectorXcd g(static_cast<Eigen::Index>(grid.n));
    Eigen::VectorXd outside(static_cast<Eigen::Index>(grid.n));
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double r = grid.node(i);
      g[static_cast<Eigen::Index>(i)] = bumps::plateau(r, a, a + 0.25, b - 0.25, b) * std::polar(1.0, r / h);
      outside[static_cast<Eigen::Index>(i)] = (r < a - delta || r > b + delta) ? 1.0 : 0.0;
    }
    Eigen::VectorXcd c0 = es.coefficients(g);
    for (Eigen::Index j = 0; j < c0.size(); ++j) c0[j] *= bumps::phi_spec(h * h * es.values[j]);
    auto out_mass = [&](const Eigen::VectorXcd& u) {
      return u.cwiseProduct(outside.cast<std::complex<double>>()).squaredNorm() / u.squaredNorm();
    };
    auto worst = [&](EvolutionKind kind, double scale) {
      double m = 0.0;
      for (double t : detail::linspace(0.0, t0, 5)) {
        Eigen::VectorXcd ct = c0;
        for (Eigen::Index j = 0; j < ct.size(); ++j) ct[j] *= multiplier(kind, t * scale, es.values[j]);
        m = std::max(m, out_mass(es.synthesize(ct)));
      }
      return m;
    };
    mass[ij] = {out_mass(es.synthesize(c0)), worst(EvolutionKind::HalfWave, 1.0), worst(EvolutionKind::Schrodinger, h)};
  });

  auto& tab = rep.table("outside_mass", {"L", "h", "mu", "initial", "wave", "schrodinger"});
  for (std::size_t ij = 0; ij < jobs.size(); ++ij) {
    tab.add({jobs[ij].L, jobs[ij].h, mu_used[ij], mass[ij][0], mass[ij][1], mass[ij][2]});
  }
  const double h_min = *std::min_element(h_list.begin(), h_list.end());
  const char* names[3] = {"initial", "wave", "schrodinger"};
  for (int f = 1; f < 3; ++f) {
    double at_min = 0.0;
    bool mono_h = true;
    for (double L : L_list) {
      // sorted by decreasing h
      std::vector<std::pair<double, double>> seq;
      for (std::size_t ij = 0; ij < jobs.size(); ++ij) {
        if (jobs[ij].L == L) seq.emplace_back(jobs[ij].h, mass[ij][static_cast<std::size_t>(f)]);
        if (jobs[ij].L == L && jobs[ij].h == h_min) at_min = std::max(at_min, mass[ij][static_cast<std::size_t>(f)]);
      }
      std::sort(seq.begin(), seq.end(), [](auto x, auto y) { return x.first > y.first; });
      for (std::size_t i = 1; i < seq.size(); ++i) mono_h = mono_h && no_larger(seq[i].second, seq[i - 1].second);
    }
    rep.check(std::string(names[f]) + "_mass_at_smallest_h", at_min, 0.0, tol);
    rep.check(std::string(names[f]) + "_decreasing_in_h", mono_h ? 1.0 : 0.0, 1.0, 1.0);
    // uniformity in L at the smallest h
    std::vector<std::pair<double, double>> byL;
    for (std::size_t ij = 0; ij < jobs.size(); ++ij) {
      if (jobs[ij].h == h_min) byL.emplace_back(jobs[ij].L, mass[ij][static_cast<std::size_t>(f)]);
    }
    std::sort(byL.begin(), byL.end());
    bool mono_L = true;
    for (std::size_t i = 1; i < byL.size(); ++i) mono_L = mono_L && no_larger(byL[i].second, byL[i - 1].second);
    rep.check(std::string(names[f]) + "_nonincreasing_in_L", mono_L ? 1.0 : 0.0, 1.0, 1.0);
  }
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

// ---- phase convexity ----------------------------------------------------------

ExperimentReport exp_phase_convexity(const WarpProfile& profile, const ExperimentContext& ctx) {
  Stopwatch sw;
  const double h = ctx.get("h", 1.0 / 64.0);
  const double mu = ctx.get("mu", 1.0);
  const std::vector<double> eps_list = ctx.list("eps_list", {0.25, 0.5});
  const std::vector<double> t_list = ctx.list("t_list", {0.05, 0.1});
  const auto nr = static_cast<std::size_t>(ctx.get("r_samples", 20));
  const auto ne = static_cast<std::size_t>(ctx.get("energy_samples", 20));
  const double e_lo = ctx.get("energy_lo", bumps::kSpecPlateauLo);
  const double e_hi = ctx.get("energy_hi", bumps::kSpecPlateauHi);
  ExperimentReport rep;
  rep.name = "phase_convexity";
  detail::set_profile(rep, profile);
  rep.parameters = {{"h", {h}},           {"mu", {mu}},         {"eps_list", eps_list},
                    {"t_list", t_list},   {"r_samples", {static_cast<double>(nr)}},
                    {"energy_samples", {static_cast<double>(ne)}}, {"energy_lo", {e_lo}}, {"energy_hi", {e_hi}}};
  if (!(mu > 0.0)) throw PreconditionError("phase_convexity needs mu > 0");

  auto& tab = rep.table("convexity", {"kind", "eps", "t", "samples", "skipped", "min_ratio", "max_det_error"});
  double min_s = HUGE_VAL, min_w = HUGE_VAL, det_err = 0.0;
  for (int kind = 0; kind < 2; ++kind) {
    for (double eps : eps_list) {
      const double L = detail::warp_inverse(profile, std::log(eps / (h * mu)));
      const double VL = h * h * mu * mu * std::exp(2.0 * profile.phi(L));
      FlowSetup setup{profile, h, mu, kind == 0 ? HamiltonianKind::Schrodinger : HamiltonianKind::HalfWave, 0.0};
      for (double t : t_list) {
        struct Sample {
          double r, rho;
          bool ok;
        };
        std::vector<Sample> samples;
        for (std::size_t i = 0; i < nr; ++i) {
          const double r = L + (static_cast<double>(i) + 0.5) / static_cast<double>(nr);
          const double V = h * h * mu * mu * std::exp(2.0 * profile.phi(r));
          for (std::size_t j = 0; j < ne; ++j) {
            const double E = e_lo + (e_hi - e_lo) * (static_cast<double>(j) + 0.5) / static_cast<double>(ne);
            // E is a value of rho^2 + V; the half-wave Hamiltonian is its square root
            if (E <= V * 1.02) {
              samples.push_back({r, 0.0, false});
              continue;
            }
            const double rho = ((i + j) % 2 == 0 ? 1.0 : -1.0) * std::sqrt(E - V);
            samples.push_back({r, rho, true});
          }
        }
        std::vector<double> ratio(samples.size(), HUGE_VAL), det(samples.size(), 0.0);
        parallel_for(samples.size(), ctx.jobs, [&](std::size_t s) {
          if (!samples[s].ok) return;
          const double r = samples[s].r;
          const double rho = samples[s].rho;
          const double width = kind == 0 ? 1.0 : 0.5;
          const double S2 = phase_hessian(setup, r, rho, t, rho - width, rho + width);
          ratio[s] = kind == 0 ? S2 / t : S2 / (t * VL);
          double d = 0.0;
          for (const auto& st : flow(setup, r, rho, t, default_flow_steps(t))) d = std::max(d, std::fabs(st.det() - 1.0));
          det[s] = d;
        });
        double mr = HUGE_VAL, md = 0.0;
        std::size_t used = 0;
        for (std::size_t s = 0; s < samples.size(); ++s) {
          if (!samples[s].ok) continue;
          ++used;
          mr = std::min(mr, ratio[s]);
          md = std::max(md, det[s]);
        }
        tab.add({static_cast<double>(kind), eps, t, static_cast<double>(used), static_cast<double>(samples.size() - used), mr, md});
        (kind == 0 ? min_s : min_w) = std::min(kind == 0 ? min_s : min_w, mr);
        det_err = std::max(det_err, md);
      }
    }
  }
  rep.check("schrodinger_min_ratio", min_s, 0.9, HUGE_VAL);
  rep.check("halfwave_min_ratio", min_w, 0.5, HUGE_VAL);
  rep.check("symplectic_det_error", det_err, 0.0, 1e-9);

  // Van der Corput on the phase built from the measured Hessian
  {
    const double eps = eps_list.front();
    const double t = t_list.back();
    const double L = detail::warp_inverse(profile, std::log(eps / (h * mu)));
    const double r = L + 0.5;
    const double V = h * h * mu * mu * std::exp(2.0 * profile.phi(r));
    FlowSetup setup{profile, h, mu, HamiltonianKind::Schrodinger, 0.0};
    const double rho_lo = std::sqrt(e_lo - V), rho_hi = std::sqrt(e_hi - V);
    const std::size_t m = 33;
    std::vector<double> rho = detail::linspace(rho_lo, rho_hi, m), S2(m), S(m, 0.0), b(m);
    for (std::size_t j = 0; j < m; ++j) {
      S2[j] = phase_hessian(setup, r, rho[j], t, rho[j] - 1.0, rho[j] + 1.0) / h;
      b[j] = bumps::plateau(rho[j], rho_lo, rho_lo + 0.1 * (rho_hi - rho_lo), rho_hi - 0.1 * (rho_hi - rho_lo), rho_hi);
    }
    const double dr = rho[1] - rho[0];
    double slope = 0.0;
    for (std::size_t j = 1; j < m; ++j) {
      slope += 0.5 * (S2[j] + S2[j - 1]) * dr;
      S[j] = S[j - 1] + slope * dr - 0.25 * (S2[j] + S2[j - 1]) * dr * dr;
    }
    const double lower = *std::min_element(S2.begin(), S2.end()) * 0.999;
    const auto vdc = van_der_corput_check(rho, S, b, lower);
    rep.table("van_der_corput", {"lhs", "bound"}).add({vdc.lhs, vdc.bound});
    rep.check("van_der_corput_lhs_over_bound", vdc.lhs / vdc.bound, 0.0, 3.0);
  }

  // coherent packet width: Im Gamma stays in [1/C, C]
  {
    const double C = ctx.get("gamma_bound", 10.0);
    const CoherentState cs{h};
    FlowSetup setup{profile, h, 1.0, HamiltonianKind::Schrodinger, 0.0};
    const auto traj = flow(setup, cs.x0(), 0.0, 1.0, default_flow_steps(1.0));
    double lo = HUGE_VAL, hi = 0.0, re_lo = HUGE_VAL, re_hi = -HUGE_VAL;
    for (const auto& st : traj) {
      const auto g = st.gamma();
      lo = std::min(lo, g.imag());
      hi = std::max(hi, g.imag());
      const double re = (std::complex<double>(0.0, 1.0) * g).real();
      re_lo = std::min(re_lo, re);
      re_hi = std::max(re_hi, re);
    }
    rep.table("gamma", {"im_min", "im_max", "re_i_gamma_min", "re_i_gamma_max"}).add({lo, hi, re_lo, re_hi});
    rep.check("im_gamma_min", lo, 1.0 / C, HUGE_VAL);
    rep.check("im_gamma_max", hi, -HUGE_VAL, C);
  }
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

// ---- principal symbol ------------------------------------------------------------

ExperimentReport exp_principal_symbol(const WarpProfile& profile, const std::vector<double>& h_list,
                                      const ExperimentContext& ctx) {
  Stopwatch sw;
  const double h_mu = ctx.get("h_mu", 0.125);
  const double c = ctx.get("c", 3.0);
  const double rmax = ctx.rmax.value_or(ctx.get("rmax", profile.r0() + 6.0));
  const double r1 = ctx.get("r1", profile.r0() + 2.0);
  const double r2 = ctx.get("r2", profile.r0() + 3.5);
  const double ramp = ctx.get("ramp", 0.5);
  const double kw = ctx.get("kappa_width", 1.9);
  const bool wide = ctx.get("wide_cutoff", 1.0) != 0.0;
  const SpectralCutoff cutoff = wide ? SpectralCutoff::wide() : SpectralCutoff::dyadic();
  ExperimentReport rep;
  rep.name = "principal_symbol";
  detail::set_profile(rep, profile);
  rep.settings["cutoff"] = wide ? "wide" : "dyadic";
  rep.parameters = {{"h_list", h_list}, {"h_mu", {h_mu}}, {"c", {c}},          {"rmax", {rmax}},
                    {"r1", {r1}},       {"r2", {r2}},     {"ramp", {ramp}},    {"kappa_width", {kw}},
                    {"wide_cutoff", {wide ? 1.0 : 0.0}}};
  std::vector<SymbolCheck> res(h_list.size());
  std::vector<double> mus(h_list.size());
  std::vector<std::size_t> ns(h_list.size());
  parallel_for(h_list.size(), ctx.jobs, [&](std::size_t ih) {
    const double h = h_list[ih];
    // nearest available angular frequency to h_mu / h
    double mu = 0.0, best = HUGE_VAL;
    for (const Mode& m : modes_up_to(ctx.manifold, 2.0 * h_mu / h + 1.0)) {
      if (m.mu > 0.0 && std::fabs(m.mu - h_mu / h) < best) {
        best = std::fabs(m.mu - h_mu / h);
        mu = m.mu;
      }
    }
    mus[ih] = mu;
    const RadialGrid grid = RadialGrid::with_step(profile.r0(), rmax, h / c);
    ns[ih] = grid.n;
    const EigenSystem es = eigendecompose(discretize(profile, mu, grid),
                                          SpectralWindow{0.99 * cutoff.lo / (h * h), 1.01 * cutoff.hi / (h * h)});
    res[ih] = symbol_vs_calculus(profile, h, mu, es, r1, r2, ramp, kw, KineticSymbol::Lattice, cutoff);
  });
  auto& tab = rep.table("error", {"h", "mu", "grid_n", "error", "calculus_norm", "symbol_sup"});
  std::vector<double> err;
  for (std::size_t ih = 0; ih < h_list.size(); ++ih) {
    tab.add({h_list[ih], mus[ih], static_cast<double>(ns[ih]), res[ih].error, res[ih].calculus_norm, res[ih].symbol_sup});
    err.push_back(res[ih].error);
  }
  const auto& fit = rep.add_fit("log error vs log h", detail::zip(h_list, err));
  rep.check("slope", fit.slope, 0.7, 1.3);
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

// ---- elliptic weights and rough Sobolev bounds ----------------------------------------

ExperimentReport exp_elliptic_weights(const WarpProfile& profile, const ExperimentContext& ctx) {
  Stopwatch sw;
  const std::vector<double> rmax_list = ctx.list("rmax_list", {40.0, 80.0});
  const auto kmax = static_cast<std::size_t>(ctx.get("k_max", 20));
  const double dr = ctx.get("dr", 0.02);
  const int samples = static_cast<int>(ctx.get("samples", 8));
  const double r1 = ctx.get("r1", profile.r0() + 1.0);
  const double growth = ctx.get("max_growth", 2.0);
  ExperimentReport rep;
  rep.name = "elliptic_weights";
  detail::set_profile(rep, profile);
  rep.parameters = {{"rmax_list", rmax_list}, {"k_max", {static_cast<double>(kmax)}}, {"dr", {dr}},
                    {"samples", {static_cast<double>(samples)}}, {"r1", {r1}}};
  if (rmax_list.size() != 2) throw PreconditionError("elliptic_weights compares exactly two values of rmax");

  // first kmax nonzero modes
  std::vector<Mode> modes;
  for (double cap = 4.0; modes.size() < kmax; cap *= 2.0) {
    modes.clear();
    for (const Mode& m : modes_up_to(ctx.manifold, cap)) {
      if (m.mu > 0.0 && modes.size() < kmax) modes.push_back(m);
    }
  }
  struct Case {
    int N, N1, N2;
  };
  const std::vector<Case> cases = {{1, 2, 0}, {1, 0, 1}, {2, 2, 1}, {2, 0, 2}};
  const int rough_N = static_cast<int>(ctx.get("rough_N", 1));
  const std::uint64_t seed = ctx.seed;

  // one value per (case, rmax) over all modes, one per (case, k) at the first rmax
  const std::size_t ncase = cases.size() + 1;  // last one is the rough Sobolev bound
  std::vector<double> whole(ncase * 2);
  std::vector<double> per_k(ncase * modes.size());
  std::vector<std::function<void()>> tasks;
  for (std::size_t ci = 0; ci < ncase; ++ci) {
    auto value = [&, ci](double rmax, const std::vector<Mode>& ms) {
      const RadialGrid grid = RadialGrid::with_step(profile.r0(), rmax, dr);
      if (ci < cases.size()) {
        return elliptic_weight_check(profile, grid, ms, cases[ci].N, cases[ci].N1, cases[ci].N2, samples, seed, r1);
      }
      return rough_sobolev_check(profile, grid, ms, rough_N, samples, seed);
    };
    for (std::size_t ir = 0; ir < 2; ++ir) tasks.push_back([&, ci, ir, value] { whole[ci * 2 + ir] = value(rmax_list[ir], modes); });
    for (std::size_t k = 0; k < modes.size(); ++k) {
      tasks.push_back([&, ci, k, value] { per_k[ci * modes.size() + k] = value(rmax_list[0], {modes[k]}); });
    }
  }
  parallel_for(tasks.size(), ctx.jobs, [&](std::size_t i) { tasks[i](); });

  auto& tab = rep.table("weights", {"case", "N", "N1", "N2", "rmax_small", "rmax_large", "doubling_ratio", "k_growth"});
  for (std::size_t ci = 0; ci < ncase; ++ci) {
    const bool rough = ci == cases.size();
    const double a = whole[ci * 2], b = whole[ci * 2 + 1];
    double first = per_k[ci * modes.size()], mx = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k) mx = std::max(mx, per_k[ci * modes.size() + k]);
    const double kg = mx / first;
    tab.add({static_cast<double>(ci), static_cast<double>(rough ? rough_N : cases[ci].N),
             rough ? -1.0 : static_cast<double>(cases[ci].N1), rough ? -1.0 : static_cast<double>(cases[ci].N2), a, b,
             b / a, kg});
    std::ostringstream key;
    if (rough) {
      key << "rough_N" << rough_N;
    } else {
      key << "elliptic_N" << cases[ci].N << "_N1_" << cases[ci].N1 << "_N2_" << cases[ci].N2;
    }
    rep.check(key.str() + "_doubling_ratio", b / a, 0.0, growth);
    rep.check(key.str() + "_k_growth", kg, 0.0, growth);
  }
  auto& ktab = rep.table("per_mode", {"case", "k", "mu", "value"});
  for (std::size_t ci = 0; ci < ncase; ++ci) {
    for (std::size_t k = 0; k < modes.size(); ++k) {
      ktab.add({static_cast<double>(ci), static_cast<double>(modes[k].k), modes[k].mu, per_k[ci * modes.size() + k]});
    }
  }

  // e^{-phi} is summable over shells and e^{phi(L)} grows without bound
  {
    const int L0 = static_cast<int>(std::ceil(profile.r0())) + 1;
    const double s100 = shell_weight_sum(profile, L0, L0 + 100);
    const double s400 = shell_weight_sum(profile, L0, L0 + 400);
    const double tail = (s400 - s100) / s400;
    const double grow = std::exp(profile.phi(L0 + 100)) / std::exp(profile.phi(L0));
    rep.table("shells", {"L0", "sum_100", "sum_400", "e_phi_growth"}).add({static_cast<double>(L0), s100, s400, grow});
    rep.check("shell_sum_tail", tail, 0.0, profile.kind() == WarpKind::Power ? 0.5 : 1e-12);
    rep.check("e_phi_growth", grow, 100.0, HUGE_VAL);
  }
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

}  // namespace cuspwave
