#include "cuspwave/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "common.hpp"
#include "cuspwave/bumps.hpp"
#include "cuspwave/errors.hpp"
#include "cuspwave/norms.hpp"
#include "cuspwave/radial.hpp"

namespace cuspwave {

namespace detail {

double warp_inverse(const WarpProfile& profile, double value) {
  double lo = profile.r0();
  if (profile.phi(lo) >= value) return lo;
  double hi = lo + 1.0;
  while (profile.phi(hi) < value) {
    hi = lo + 2.0 * (hi - lo);
    if (hi > 1e6) throw DomainError("warp_inverse: value out of reach");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (profile.phi(mid) < value ? lo : hi) = mid;
  }
  return hi;
}

std::string describe(const WarpProfile& profile) {
  std::ostringstream os;
  os << to_string(profile.kind());
  if (profile.kind() == WarpKind::Power) os << "(sigma=" << profile.sigma() << ")";
  os << " r0=" << profile.r0();
  return os.str();
}

}  // namespace detail

using detail::Stopwatch;

double ExperimentContext::get(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (it->second.size() != 1) throw PreconditionError("parameter '" + key + "' must be a scalar");
  return it->second.front();
}

std::vector<double> ExperimentContext::list(const std::string& key, std::vector<double> fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  // splitmix64 over the tuple
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t s = mix(seed);
  s = mix(s ^ a);
  s = mix(s ^ b);
  return mix(s ^ c);
}

// ---- counterexamples ------------------------------------------------------

namespace {

struct FailureSetup {
  RadialGrid grid;
  EigenSystem es;
  Mode zero;
};

FailureSetup failure_setup(const WarpProfile& profile, const std::vector<double>& n_list, const ExperimentContext& ctx,
                           double default_rmax, double default_dr) {
  if (n_list.size() < 4) throw PreconditionError("n_list needs at least 4 entries");
  if (!std::is_sorted(n_list.begin(), n_list.end())) throw PreconditionError("n_list must be increasing");
  const double rmax = ctx.rmax.value_or(ctx.get("rmax", default_rmax));
  if (n_list.back() + 10.0 > rmax) {
    std::ostringstream os;
    os << "grid too short: max n + 10 = " << n_list.back() + 10.0 << " exceeds rmax = " << rmax;
    throw PreconditionError(os.str());
  }
  if (n_list.front() - 2.0 <= profile.r0()) throw PreconditionError("n_list starts too close to r0");
  const RadialGrid grid = ctx.n ? RadialGrid::make(profile.r0(), rmax, *ctx.n)
                                : RadialGrid::with_step(profile.r0(), rmax, ctx.get("dr", default_dr));
  FailureSetup s{grid, eigendecompose(discretize(profile, 0.0, grid)), make_mode(ctx.manifold, 0, 0, Parity::Const)};
  return s;
}

// Fixed bump u0(r - n), unit L^2 norm on the grid.
Eigen::VectorXcd translate_bump(const RadialGrid& grid, double n) {
  Eigen::VectorXcd u(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i) u[static_cast<Eigen::Index>(i)] = bumps::chi(grid.node(i) - n);
  return u / grid_norm(u, grid.dr());
}

std::vector<double> exp_phi(const WarpProfile& profile, const std::vector<double>& n_list) {
  std::vector<double> x;
  for (double n : n_list) x.push_back(std::exp(profile.phi(n)));
  return x;
}

}  // namespace

ExperimentReport exp_sobolev_failure(const WarpProfile& profile, double q, double sigma,
                                     const std::vector<double>& n_list, const ExperimentContext& ctx) {
  Stopwatch sw;
  if (!(q > 2.0)) throw PreconditionError("sobolev failure needs q > 2");
  if (!(sigma >= 0.0)) throw PreconditionError("sobolev failure needs sigma >= 0");
  ExperimentReport rep;
  rep.name = "sobolev_failure_" + to_string(profile.kind());
  detail::set_profile(rep, profile);
  rep.parameters = {{"q", {q}}, {"sigma", {sigma}}, {"n_list", n_list}};
  const FailureSetup s = failure_setup(profile, n_list, ctx, 30.0, 0.02);
  rep.parameters["rmax"] = {s.grid.rmax};
  rep.parameters["grid_n"] = {static_cast<double>(s.grid.n)};

  auto& tab = rep.table("quotient", {"n", "phi_n", "lq", "h_sigma", "Q"});
  std::vector<double> Q;
  for (double n : n_list) {
    const CuspState st = detail::single_mode(s.zero, s.grid, translate_bump(s.grid, n));
    const double lq = lq_spatial(st, q, profile, ctx.manifold);
    const double hs = sobolev(st, sigma, std::vector<const EigenSystem*>{&s.es});
    Q.push_back(lq / hs);
    tab.add({n, profile.phi(n), lq, hs, lq / hs});
  }
  const double eps = 0.5 - 1.0 / q;
  const auto& fit = rep.add_fit("log Q vs phi(n)", detail::zip(exp_phi(profile, n_list), Q));
  rep.check("slope", fit.slope, 0.85 * eps, 1.15 * eps);
  rep.check("Q_increasing", detail::strictly_increasing(Q) ? 1.0 : 0.0, 1.0, 1.0);
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

ExperimentReport exp_wave_failure(const WarpProfile& profile, double p, double q, double sigma,
                                  const std::vector<double>& n_list, const ExperimentContext& ctx) {
  Stopwatch sw;
  if (!(q > 2.0)) throw PreconditionError("wave failure needs q > 2");
  if (!(sigma >= 0.0)) throw PreconditionError("wave failure needs sigma >= 0");
  ExperimentReport rep;
  rep.name = "wave_failure";
  detail::set_profile(rep, profile);
  const double t0 = ctx.get("t0", 0.25);
  const auto nt = static_cast<std::size_t>(ctx.get("time_nodes", 33));
  const double sigma_alt = ctx.get("sigma_alt", 4.0);
  if (!(t0 > 0.0 && t0 <= 1.0)) throw PreconditionError("wave failure: t0 must lie in (0, 1]");
  rep.parameters = {{"p", {p}}, {"q", {q}}, {"sigma", {sigma}}, {"sigma_alt", {sigma_alt}},
                    {"n_list", n_list}, {"t0", {t0}}, {"time_nodes", {static_cast<double>(nt)}}};
  const FailureSetup s = failure_setup(profile, n_list, ctx, 30.0, 0.02);
  rep.parameters["rmax"] = {s.grid.rmax};
  rep.parameters["grid_n"] = {static_cast<double>(s.grid.n)};
  const LqEvaluator lq(profile, ctx.manifold, {s.zero}, s.grid, q);
  const std::vector<const EigenSystem*> es{&s.es};
  const std::vector<double> times = detail::linspace(0.0, t0, nt);

  auto& tab = rep.table("quotient", {"n", "phi_n", "mixed", "h_sigma", "Q", "Q_alt", "lq_t0"});
  std::vector<double> Q, Qalt;
  for (double n : n_list) {
    const CuspState st = detail::single_mode(s.zero, s.grid, translate_bump(s.grid, n));
    const Eigen::VectorXcd c = s.es.coefficients(st.u[0]);
    std::vector<double> norms;
    for (double t : times) {
      Eigen::VectorXcd ct = c;
      for (Eigen::Index j = 0; j < ct.size(); ++j) ct[j] *= multiplier(EvolutionKind::CosWave, t, s.es.values[j]);
      norms.push_back(lq.evaluate(s.es.synthesize(ct)));
    }
    const double mixed = mixed_norm(norms, p, t0);
    const double hs = sobolev(st, sigma, es);
    const double hs_alt = sobolev(st, sigma_alt, es);
    Q.push_back(mixed / hs);
    Qalt.push_back(mixed / hs_alt);
    tab.add({n, profile.phi(n), mixed, hs, mixed / hs, mixed / hs_alt, norms.front()});
  }
  const double eps = 0.5 - 1.0 / q;
  const std::vector<double> x = exp_phi(profile, n_list);
  const auto& fit = rep.add_fit("log Q vs phi(n)", detail::zip(x, Q));
  rep.check("slope", fit.slope, 0.85 * eps, 1.15 * eps);
  rep.check("Q_increasing", detail::strictly_increasing(Q) ? 1.0 : 0.0, 1.0, 1.0);
  const auto& alt = rep.add_fit("log Q vs phi(n), sigma_alt", detail::zip(x, Qalt));
  rep.check("slope_sigma_alt", alt.slope, 0.85 * eps, 1.15 * eps);
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

ExperimentReport exp_schrodinger_failure_exact(const WarpProfile& profile, double p, double q, double sigma,
                                               const std::vector<double>& n_list, const ExperimentContext& ctx) {
  Stopwatch sw;
  if (profile.kind() != WarpKind::Exp || profile.r0() != 0.0) {
    throw PreconditionError("the exact flat-cusp solution needs the exponential cusp with r0 = 0");
  }
  if (!(q > 2.0)) throw PreconditionError("schrodinger failure needs q > 2");
  ExperimentReport rep;
  rep.name = "schrodinger_failure_exact";
  detail::set_profile(rep, profile);
  const double rmax = ctx.rmax.value_or(ctx.get("rmax", 60.0));
  const double lambda_max = ctx.get("lambda_max", 400.0);
  const double oracle_n = ctx.get("oracle_n", 8.0);
  const double t_max = ctx.get("oracle_t_max", 1.0);
  const auto oracle_nodes = static_cast<std::size_t>(ctx.get("oracle_time_nodes", 21));
  const double T = ctx.get("T", 1.0);
  const auto nt = static_cast<std::size_t>(ctx.get("time_nodes", 65));
  rep.parameters = {{"p", {p}},
                    {"q", {q}},
                    {"sigma", {sigma}},
                    {"n_list", n_list},
                    {"rmax", {rmax}},
                    {"lambda_max", {lambda_max}},
                    {"oracle_n", {oracle_n}},
                    {"oracle_t_max", {t_max}},
                    {"T", {T}}};
  if (n_list.size() < 4) throw PreconditionError("n_list needs at least 4 entries");
  if (n_list.back() + 10.0 > rmax) throw PreconditionError("grid too short for n_list");
  const RadialGrid grid = ctx.n ? RadialGrid::make(0.0, rmax, *ctx.n) : RadialGrid::with_step(0.0, rmax, ctx.get("dr", 0.01));
  rep.parameters["dr"] = {grid.dr()};
  const EigenSystem es = eigendecompose(discretize(profile, 0.0, grid), SpectralWindow{-1.0, lambda_max});
  const Eigen::VectorXd r = grid.nodes();
  const Mode zero = make_mode(ctx.manifold, 0, 0, Parity::Const);

  // numerical propagator against the closed form
  {
    auto& tab = rep.table("oracle", {"t", "sup_error"});
    const CuspState st0 = detail::single_mode(zero, grid, exact_flat_cusp(oracle_n, 0.0, r));
    double worst = 0.0;
    for (double t : detail::linspace(-t_max, t_max, oracle_nodes)) {
      const CuspState st = evolve(st0, std::vector<const EigenSystem*>{&es}, t, EvolutionKind::Schrodinger);
      const double err = (st.u[0] - exact_flat_cusp(oracle_n, -t, r)).cwiseAbs().maxCoeff();
      worst = std::max(worst, err);
      tab.add({t, err});
    }
    rep.check("oracle_sup_error", worst, 0.0, ctx.get("oracle_tol", 1e-4));
  }

  const LqEvaluator lq(profile, ctx.manifold, {zero}, grid, q);
  const std::vector<double> times = detail::linspace(0.0, T, nt);
  auto mixed_of = [&](const std::function<Eigen::VectorXcd(double)>& u_at) {
    std::vector<double> norms;
    for (double t : times) norms.push_back(lq.evaluate(u_at(t)));
    return mixed_norm(norms, p, T);
  };

  auto& tab = rep.table("quotient", {"n", "mixed", "h_sigma", "Q"});
  std::vector<double> Q, x;
  for (double n : n_list) {
    const double mixed = mixed_of([&](double t) { return exact_flat_cusp(n, -t, r); });
    const CuspState st = detail::single_mode(zero, grid, exact_flat_cusp(n, 0.0, r));
    const double hs = sobolev(st, sigma, std::vector<const EigenSystem*>{&es});
    Q.push_back(mixed / hs);
    x.push_back(std::exp(n));
    tab.add({n, mixed, hs, mixed / hs});
  }
  // mirror Gaussian centred at -n
  {
    const double n = oracle_n;
    const double total = mixed_of([&](double t) { return exact_flat_cusp(n, -t, r); });
    const double image = mixed_of([&](double t) {
      const std::complex<double> one_m(1.0, 2.0 * t);
      const std::complex<double> pref = std::polar(1.0, -t / 4.0) / std::sqrt(one_m);
      Eigen::VectorXcd v(r.size());
      for (Eigen::Index i = 0; i < r.size(); ++i) v[i] = pref * std::exp(-(r[i] + n) * (r[i] + n) / (2.0 * one_m));
      return v;
    });
    rep.table("image", {"n", "image_mixed", "total_mixed"}).add({n, image, total});
    rep.check("image_share", image / total, 0.0, 0.01);
  }
  const double eps = 0.5 - 1.0 / q;
  const auto& fit = rep.add_fit("log Q vs n", detail::zip(x, Q));
  rep.check("slope", fit.slope, 0.85 * eps, 1.15 * eps);
  rep.check("Q_increasing", detail::strictly_increasing(Q) ? 1.0 : 0.0, 1.0, 1.0);
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

}  // namespace cuspwave
