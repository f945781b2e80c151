#include <cmath>

#include "cuspwave/errors.hpp"
#include "cuspwave/experiments.hpp"

namespace cuspwave {

std::vector<ExperimentReport> run_sharpness_pairs(const std::vector<AdmissiblePair>& pairs,
                                                  const std::vector<double>& h_list, double sigma,
                                                  const ExperimentContext& ctx);

namespace {

std::vector<double> dyadic(int from, int to) {
  std::vector<double> h;
  for (int k = from; k <= to; ++k) h.push_back(std::ldexp(1.0, -k));
  return h;
}

// lo, lo 2^{1/steps}, ... up to hi
std::vector<double> geometric(double lo, double hi, int steps_per_octave) {
  std::vector<double> t;
  for (int i = 0;; ++i) {
    const double x = lo * std::exp2(static_cast<double>(i) / steps_per_octave);
    if (x > hi * (1.0 + 1e-12)) break;
    t.push_back(x);
  }
  return t;
}

std::vector<double> half_octaves(double lo, double hi) { return geometric(lo, hi, 2); }

WarpProfile profile_or_exp(const ExperimentContext& ctx) { return ctx.profile.value_or(WarpProfile::exp_cusp()); }

int as_int(double x, const char* what) {
  if (x != std::floor(x) || x < 1) throw PreconditionError(std::string(what) + " must be a positive integer");
  return static_cast<int>(x);
}

std::vector<ExperimentInfo> build_catalog() {
  std::vector<ExperimentInfo> c;
  const std::vector<double> n_list = {6, 8, 10, 12, 14};

  c.push_back({"schrodinger_failure_exact",
               "Zero-mode Gaussian translates on the exponential cusp: closed-form solution vs the spectral "
               "propagator, and growth e^{(1/2 - 1/q) n} of the Strichartz quotient",
               {{"p", {4}},
                {"q", {4}},
                {"sigma", {1}},
                {"n_list", n_list},
                {"rmax", {60}},
                {"dr", {0.01}},
                {"lambda_max", {400}},
                {"oracle_n", {8}},
                {"oracle_t_max", {1}},
                {"oracle_time_nodes", {21}},
                {"oracle_tol", {1e-4}},
                {"T", {1}},
                {"time_nodes", {65}}},
               [](const ExperimentContext& ctx) {
                 return std::vector<ExperimentReport>{exp_schrodinger_failure_exact(
                     profile_or_exp(ctx), ctx.get("p", 4), ctx.get("q", 4), ctx.get("sigma", 1),
                     ctx.list("n_list", {}), ctx)};
               }});

  c.push_back({"sobolev_failure",
               "Zero angular modes: L^q / H^sigma quotient of translated bumps grows like e^{(1/2 - 1/q) phi(n)}",
               {{"q", {4}}, {"sigma", {2}}, {"n_list", n_list}, {"rmax", {30}}, {"dr", {0.02}}},
               [](const ExperimentContext& ctx) {
                 std::vector<WarpProfile> profiles;
                 if (ctx.profile) {
                   profiles.push_back(*ctx.profile);
                 } else {
                   profiles = {WarpProfile::exp_cusp(), WarpProfile::cosh_cusp()};
                 }
                 std::vector<ExperimentReport> out;
                 for (const auto& p : profiles) {
                   out.push_back(exp_sobolev_failure(p, ctx.get("q", 4), ctx.get("sigma", 2), ctx.list("n_list", {}), ctx));
                 }
                 return out;
               }});

  c.push_back({"wave_failure",
               "Zero angular modes: mixed L^p([0,t0]; L^q) norms of cos(t sqrt p_0) on translated bumps",
               {{"p", {8}},
                {"q", {4}},
                {"sigma", {2}},
                {"sigma_alt", {4}},
                {"n_list", n_list},
                {"t0", {0.25}},
                {"time_nodes", {33}},
                {"rmax", {30}},
                {"dr", {0.02}}},
               [](const ExperimentContext& ctx) {
                 return std::vector<ExperimentReport>{exp_wave_failure(profile_or_exp(ctx), ctx.get("p", 8), ctx.get("q", 4),
                                                                       ctx.get("sigma", 2), ctx.list("n_list", {}), ctx)};
               }});

  c.push_back({"sharpness",
               "Coherent states on the first angular mode: semiclassical Schrodinger norm blows up like h^{-3/(2p)}",
               {{"p_list", {4, 6}},
                {"h_list", dyadic(4, 9)},
                {"sigma", {1}},
                {"c", {5}},
                {"r1", {0.5}},
                {"rmax_extra", {3}},
                {"lambda_factor", {10}},
                {"time_nodes", {33}}},
               [](const ExperimentContext& ctx) {
                 std::vector<AdmissiblePair> pairs;
                 for (double p : ctx.list("p_list", {})) pairs.push_back({p, 1.0 / (0.5 - 1.0 / p), PairFamily::SchrodingerSharp});
                 return run_sharpness_pairs(pairs, ctx.list("h_list", {}), ctx.get("sigma", 1), ctx);
               }});

  c.push_back({"schrodinger_semiclassical",
               "Random spectrally localized data: semiclassical Schrodinger quotient on [0, h] stays bounded in h",
               {{"p", {4}},
                {"q", {4}},
                {"h_list", dyadic(3, 7)},
                {"sample_count", {16}},
                {"r1", {0.5}},
                {"c", {5}},
                {"time_nodes", {33}},
                {"rmax_margin", {1.5}}},
               [](const ExperimentContext& ctx) {
                 const AdmissiblePair pair{ctx.get("p", 4), ctx.get("q", 4), PairFamily::SchrodingerSharp};
                 return std::vector<ExperimentReport>{exp_schrodinger_semiclassical(
                     profile_or_exp(ctx), pair, ctx.list("h_list", {}), as_int(ctx.get("sample_count", 16), "sample_count"),
                     ctx.seed, ctx)};
               }});

  c.push_back({"wave_strichartz",
               "Random spectrally localized data: wave quotient with h^{-sigma_w} normalization stays bounded in h",
               {{"p", {8}},
                {"q", {4}},
                {"h_list", dyadic(3, 7)},
                {"sample_count", {16}},
                {"t0", {1}},
                {"r1", {0.5}},
                {"c", {5}},
                {"time_nodes", {33}},
                {"rmax_margin", {1.5}}},
               [](const ExperimentContext& ctx) {
                 const AdmissiblePair pair{ctx.get("p", 8), ctx.get("q", 4), PairFamily::WaveSharp};
                 return std::vector<ExperimentReport>{exp_wave_strichartz(profile_or_exp(ctx), pair, ctx.list("h_list", {}),
                                                                          as_int(ctx.get("sample_count", 16), "sample_count"),
                                                                          ctx.seed, ctx)};
               }});

  c.push_back({"dispersion",
               "Frequency-localized propagator kernels on a shell: sup decays like tau^{-1/2}; half-wave constant ~ 1/mu",
               {{"schrodinger_h", {std::ldexp(1.0, -8)}},
                {"schrodinger_L", {std::log(0.5 * 256.0)}},
                {"schrodinger_mu", {1}},
                {"schrodinger_t_list", half_octaves(std::ldexp(1.0, -6), 0.25)},
                {"wave_h", {std::ldexp(1.0, -11)}},
                {"wave_L", {std::log(0.3 * 2048.0)}},
                {"wave_mu_list", {1, 2, 4}},
                {"wave_t_list", geometric(0.125, 0.5, 4)},
                {"c", {5}},
                {"left_margin", {0.5}},
                {"wall", {3}},
                {"column_stride", {4}}},
               [](const ExperimentContext& ctx) {
                 const WarpProfile p = profile_or_exp(ctx);
                 std::vector<ExperimentReport> out;
                 out.push_back(exp_dispersion(p, DispersionKind::Schrodinger, {ctx.get("schrodinger_h", 0)},
                                              ctx.list("schrodinger_t_list", {}), ctx.get("schrodinger_L", 0),
                                              {ctx.get("schrodinger_mu", 1)}, ctx));
                 out.push_back(exp_dispersion(p, DispersionKind::HalfWave, {ctx.get("wave_h", 0)}, ctx.list("wave_t_list", {}),
                                              ctx.get("wave_L", 0), ctx.list("wave_mu_list", {}), ctx));
                 return out;
               }});

  c.push_back({"phase_convexity",
               "Hessian of the geometric-optics phase on a shell: d^2S/drho^2 >= |t| (Schrodinger) and its half-wave "
               "analogue; symplecticity of the variational flow; Van der Corput; coherent-state width",
               {{"h", {1.0 / 64.0}},
                {"mu", {1}},
                {"eps_list", {0.25, 0.5}},
                {"t_list", {0.05, 0.1}},
                {"r_samples", {20}},
                {"energy_samples", {20}},
                {"energy_lo", {0.75}},
                {"energy_hi", {1.5}},
                {"gamma_bound", {10}}},
               [](const ExperimentContext& ctx) {
                 return std::vector<ExperimentReport>{exp_phase_convexity(profile_or_exp(ctx), ctx)};
               }});

  c.push_back({"principal_symbol",
               "f(h^2 p_k) against the quantization of f(rho^2 + h^2 mu^2 e^{2 phi}) on a shell: error O(h)",
               {{"h_list", dyadic(3, 8)},
                {"h_mu", {0.125}},
                {"c", {3}},
                {"rmax", {6}},
                {"r1", {2}},
                {"r2", {3.5}},
                {"ramp", {0.5}},
                {"kappa_width", {1.9}},
                {"wide_cutoff", {1}}},
               [](const ExperimentContext& ctx) {
                 return std::vector<ExperimentReport>{exp_principal_symbol(profile_or_exp(ctx), ctx.list("h_list", {}), ctx)};
               }});

  c.push_back({"finite_speed",
               "Shell-localized spectrally localized data stays in the widened shell, uniformly in L",
               {{"h_list", dyadic(4, 7)},
                {"L_list", {0, 5, 10}},
                {"t0", {0.1}},
                {"r1", {1}},
                {"delta", {0.4}},
                {"c", {4}},
                {"rmax_extra", {2}},
                {"eps_max", {0.5}},
                {"mass_tol", {1e-3}}},
               [](const ExperimentContext& ctx) {
                 return std::vector<ExperimentReport>{exp_finite_speed(profile_or_exp(ctx), ctx.list("h_list", {}),
                                                                       ctx.list("L_list", {}), ctx.get("t0", 0.1), ctx)};
               }});

  c.push_back({"littlewood_paley",
               "Dyadic spectral partition of unity and the square-function bound on Pi^c xi psi",
               {{"q", {4}},
                {"sample_count", {16}},
                {"rmax", {8}},
                {"dr", {0.02}},
                {"mu_max", {10}},
                {"band_limit", {4096}},
                {"r1", {1}},
                {"l_max", {0}}},
               [](const ExperimentContext& ctx) {
                 return std::vector<ExperimentReport>{exp_littlewood_paley(
                     profile_or_exp(ctx), ctx.get("q", 4), as_int(ctx.get("sample_count", 16), "sample_count"), ctx.seed, ctx)};
               }});

  c.push_back({"elliptic_weights",
               "Weighted resolvent bounds mu^{2N2} e^{2N2 phi} D^{N1} xi (p_k + 1)^{-N} and rough Sobolev bounds: no growth "
               "with rmax or k; shell sums of e^{-phi}",
               {{"rmax_list", {40, 80}}, {"k_max", {20}}, {"dr", {0.02}}, {"samples", {8}}, {"r1", {1}}, {"rough_N", {1}}, {"max_growth", {2}}},
               [](const ExperimentContext& ctx) {
                 return std::vector<ExperimentReport>{exp_elliptic_weights(profile_or_exp(ctx), ctx)};
               }});

  c.push_back({"invariants",
               "Unitarity, Parseval, group law, wave energy, angular round trips, config and report round trips, "
               "byte-identical CSV under a fixed seed",
               {{"rmax", {12}}, {"dr", {0.02}}, {"mu_max", {3}}},
               [](const ExperimentContext& ctx) { return std::vector<ExperimentReport>{exp_invariants(ctx)}; }});
  return c;
}

}  // namespace

const std::vector<ExperimentInfo>& catalog() {
  static const std::vector<ExperimentInfo> c = build_catalog();
  return c;
}

const ExperimentInfo* find_experiment(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const auto& e : catalog()) names.push_back(e.name);
  names.push_back("suite");
  return names;
}

std::vector<ExperimentReport> run_experiment(const std::string& name, const ExperimentContext& ctx) {
  if (name == "suite") {
    std::vector<ExperimentReport> all;
    for (const auto& e : catalog()) {
      for (auto& r : run_experiment(e.name, ctx)) all.push_back(std::move(r));
    }
    return all;
  }
  const ExperimentInfo* info = find_experiment(name);
  if (!info) {
    std::string valid;
    for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw PreconditionError("unknown experiment '" + name + "'; valid names: " + valid);
  }
  ExperimentContext local = ctx;
  local.params = info->defaults;
  for (const auto& [k, v] : ctx.params) {
    if (info->defaults.count(k)) local.params[k] = v;
  }
  return info->run(local);
}

}  // namespace cuspwave
