// Structural invariants of the whole pipeline, checked on a small cusp.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

#include "common.hpp"
#include "cuspwave/config.hpp"
#include "cuspwave/errors.hpp"
#include "cuspwave/experiments.hpp"

namespace cuspwave {

using detail::Stopwatch;

ExperimentReport exp_invariants(const ExperimentContext& ctx) {
  Stopwatch sw;
  const WarpProfile profile = ctx.profile.value_or(WarpProfile::exp_cusp());
  const double rmax = ctx.rmax.value_or(ctx.get("rmax", profile.r0() + 12.0));
  const double mu_max = ctx.mu_max.value_or(ctx.get("mu_max", 3.0));
  ExperimentReport rep;
  rep.name = "invariants";
  detail::set_profile(rep, profile);
  rep.parameters = {{"rmax", {rmax}}, {"mu_max", {mu_max}}};
  const RadialGrid grid = ctx.n ? RadialGrid::make(profile.r0(), rmax, *ctx.n)
                                : RadialGrid::with_step(profile.r0(), rmax, ctx.get("dr", 0.02));
  const std::vector<Mode> modes = modes_up_to(ctx.manifold, mu_max);
  std::vector<EigenSystem> es;
  std::vector<RadialOperator> ops;
  for (const Mode& m : modes) {
    ops.push_back(discretize(profile, m.mu, grid));
    es.push_back(eigendecompose(ops.back()));
  }
  // smooth random data: low-lying eigenfunctions with Gaussian weights
  std::mt19937_64 rng(stream_seed(ctx.seed, 7));
  auto smooth_state = [&] {
    CuspState s = CuspState::zero(modes, grid);
    for (std::size_t k = 0; k < modes.size(); ++k) {
      Eigen::VectorXcd c = detail::complex_gaussian(rng, es[k].size());
      for (Eigen::Index j = 0; j < c.size(); ++j) c[j] *= std::exp(-es[k].values[j] / 200.0);
      s.u[k] = es[k].synthesize(c);
    }
    return s;
  };
  const CuspState u0 = smooth_state();
  const CuspState u1 = smooth_state();
  auto sup_diff = [](const CuspState& a, const CuspState& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.u.size(); ++k) d = std::max(d, (a.u[k] - b.u[k]).cwiseAbs().maxCoeff());
    return d;
  };
  auto sup_abs = [](const CuspState& a) {
    double d = 0.0;
    for (const auto& v : a.u) d = std::max(d, v.cwiseAbs().maxCoeff());
    return d;
  };

  // unitarity of the Schrodinger and half-wave groups
  {
    double worst = 0.0;
    for (double t : {0.3, 1.7, -2.5}) {
      for (auto kind : {EvolutionKind::Schrodinger, EvolutionKind::HalfWave}) {
        worst = std::max(worst, std::fabs(evolve(u0, es, t, kind).norm() / u0.norm() - 1.0));
      }
    }
    rep.check("unitarity", worst, 0.0, 1e-12);
  }
  // Parseval: coefficient norm equals grid norm for complete eigensystems
  {
    double worst = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const double a = es[k].coefficients(u0.u[k]).norm();
      const double b = grid_norm(u0.u[k], grid.dr());
      worst = std::max(worst, std::fabs(a - b) / b);
    }
    rep.check("parseval", worst, 0.0, 1e-12);
  }
  // group law
  {
    const double t = 0.4, s = 1.1;
    double worst = 0.0;
    for (auto kind : {EvolutionKind::Schrodinger, EvolutionKind::HalfWave}) {
      const CuspState a = evolve(evolve(u0, es, t, kind), es, s, kind);
      const CuspState b = evolve(u0, es, t + s, kind);
      worst = std::max(worst, sup_diff(a, b) / sup_abs(u0));
    }
    rep.check("group_law", worst, 0.0, 1e-12);
  }
  // wave energy <p u, u> + |u_t|^2 along u(t) = cos(t sqrt p) u0 + sin(t sqrt p)/sqrt p u1
  {
    auto energy = [&](double t) {
      const CuspState c0 = evolve(u0, es, t, EvolutionKind::CosWave);
      const CuspState s1 = evolve(u1, es, t, EvolutionKind::SinWaveOverSqrt);
      const CuspState s0 = evolve(u0, es, t, EvolutionKind::SinWaveOverSqrt);
      const CuspState c1 = evolve(u1, es, t, EvolutionKind::CosWave);
      double e = 0.0;
      for (std::size_t k = 0; k < modes.size(); ++k) {
        const Eigen::VectorXcd u = c0.u[k] + s1.u[k];
        const Eigen::VectorXcd ut = c1.u[k] - ops[k].apply(s0.u[k]);
        e += (u.conjugate().cwiseProduct(ops[k].apply(u))).sum().real() * grid.dr() + ut.squaredNorm() * grid.dr();
      }
      return e;
    };
    const double e0 = energy(0.0);
    double worst = 0.0;
    for (double t : {0.5, 1.3, 3.0}) worst = std::max(worst, std::fabs(energy(t) / e0 - 1.0));
    rep.check("wave_energy", worst, 0.0, 1e-10);
  }
  // angular synthesize / analyze
  {
    std::vector<std::complex<double>> c(modes.size());
    for (auto& z : c) z = {std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng)};
    const auto back = analyze(modes, ctx.manifold, synthesize(modes, ctx.manifold, c, default_theta_points(modes)));
    double worst = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) worst = std::max(worst, std::abs(back[k] - c[k]));
    rep.check("angular_round_trip", worst, 0.0, 1e-12);
  }
  // config round trip
  {
    const std::string text =
        "experiment = sharpness\nseed = 123456789012345\njobs = 3\ngeometry.kind = power\ngeometry.sigma = 2.5\n"
        "angular.circumferences = [6.283185307179586, 3]\nradial.rmax = 17.25\nparam.h_list = [0.5, 0.25, 0.125, 0.0625]\n";
    const RunConfig a = parse_config(text);
    const RunConfig b = parse_config(serialize(a));
    rep.check("config_round_trip", a == b ? 1.0 : 0.0, 1.0, 1.0);
  }
  // eigensystem cache round trip
  {
    const auto path = std::filesystem::temp_directory_path() / ("cuspwave-inv-" + std::to_string(ctx.seed) + ".bin");
    write_eigensystem(path.string(), es.back());
    const EigenSystem back = read_eigensystem(path.string());
    std::filesystem::remove(path);
    const bool same = back.grid == es.back().grid && back.mu == es.back().mu && back.values == es.back().values &&
                      back.vectors == es.back().vectors;
    rep.check("eigensystem_cache_round_trip", same ? 1.0 : 0.0, 1.0, 1.0);
  }
  // same seed, different job counts: identical CSV bytes; report JSON round trip
  {
    ExperimentContext small;
    small.seed = ctx.seed;
    small.params = {{"sample_count", {3}}, {"rmax", {6}}, {"mu_max", {4}}, {"band_limit", {512}}};
    small.jobs = 1;
    const ExperimentReport a = exp_littlewood_paley(profile, 4.0, 3, ctx.seed, small);
    small.jobs = 3;
    const ExperimentReport b = exp_littlewood_paley(profile, 4.0, 3, ctx.seed, small);
    rep.check("csv_byte_identical", to_csv(a) == to_csv(b) ? 1.0 : 0.0, 1.0, 1.0);
    const ExperimentReport back = report_from_json(to_json(a));
    rep.check("report_json_round_trip", back == a ? 1.0 : 0.0, 1.0, 1.0);
  }
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

}  // namespace cuspwave
