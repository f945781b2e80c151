#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cuspwave/angular.hpp"
#include "cuspwave/geometry.hpp"
#include "cuspwave/norms.hpp"
#include "cuspwave/propagate.hpp"
#include "cuspwave/report.hpp"

namespace cuspwave {

// Everything an experiment may read besides its typed arguments.
// params holds numeric knobs; missing keys fall back to the catalog defaults of the experiment.
struct ExperimentContext {
  std::optional<WarpProfile> profile;  // overrides the experiment's default profile(s)
  AngularManifold manifold = AngularManifold::unit_circle();
  std::optional<double> mu_max;
  std::optional<double> rmax;  // radial overrides, honoured by fixed-grid experiments
  std::optional<std::size_t> n;
  std::uint64_t seed = 42;
  int jobs = 1;
  Params params;

  double get(const std::string& key, double fallback) const;
  std::vector<double> list(const std::string& key, std::vector<double> fallback) const;
};

// Runs body(i) for i in [0, count) on up to `jobs` threads. Exceptions are rethrown (lowest index first).
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

// Deterministic per-task stream: the same (seed, a, b, c) always gives the same draws.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

// ---- counterexamples --------------------------------------------------

ExperimentReport exp_sobolev_failure(const WarpProfile& profile, double q, double sigma,
                                     const std::vector<double>& n_list, const ExperimentContext& ctx);
ExperimentReport exp_wave_failure(const WarpProfile& profile, double p, double q, double sigma,
                                  const std::vector<double>& n_list, const ExperimentContext& ctx);
ExperimentReport exp_schrodinger_failure_exact(const WarpProfile& profile, double p, double q, double sigma,
                                               const std::vector<double>& n_list, const ExperimentContext& ctx);
ExperimentReport exp_sharpness(const AdmissiblePair& pair, const std::vector<double>& h_list, double sigma,
                               const ExperimentContext& ctx);

// ---- upper bounds -----------------------------------------------------

ExperimentReport exp_wave_strichartz(const WarpProfile& profile, const AdmissiblePair& pair,
                                     const std::vector<double>& h_list, int sample_count, std::uint64_t seed,
                                     const ExperimentContext& ctx);
ExperimentReport exp_schrodinger_semiclassical(const WarpProfile& profile, const AdmissiblePair& pair,
                                               const std::vector<double>& h_list, int sample_count,
                                               std::uint64_t seed, const ExperimentContext& ctx);
enum class DispersionKind { Schrodinger, HalfWave };
ExperimentReport exp_dispersion(const WarpProfile& profile, DispersionKind nu, const std::vector<double>& h_list,
                                const std::vector<double>& t_list, double L, const std::vector<double>& mu_list,
                                const ExperimentContext& ctx);
ExperimentReport exp_littlewood_paley(const WarpProfile& profile, double q, int sample_count, std::uint64_t seed,
                                      const ExperimentContext& ctx);

// ---- microlocal -------------------------------------------------------

ExperimentReport exp_finite_speed(const WarpProfile& profile, const std::vector<double>& h_list,
                                  const std::vector<double>& L_list, double t0, const ExperimentContext& ctx);
ExperimentReport exp_phase_convexity(const WarpProfile& profile, const ExperimentContext& ctx);
ExperimentReport exp_principal_symbol(const WarpProfile& profile, const std::vector<double>& h_list,
                                      const ExperimentContext& ctx);
ExperimentReport exp_elliptic_weights(const WarpProfile& profile, const ExperimentContext& ctx);
ExperimentReport exp_invariants(const ExperimentContext& ctx);

// ---- catalog ----------------------------------------------------------

struct ExperimentInfo {
  std::string name;
  std::string description;
  Params defaults;
  std::function<std::vector<ExperimentReport>(const ExperimentContext&)> run;
};

const std::vector<ExperimentInfo>& catalog();
const ExperimentInfo* find_experiment(const std::string& name);
std::vector<std::string> experiment_names();  // catalog order, plus "suite"
// Runs one catalog entry (or every entry for "suite"); ctx.params are overrides on top of the defaults.
std::vector<ExperimentReport> run_experiment(const std::string& name, const ExperimentContext& ctx);

}  // namespace cuspwave
