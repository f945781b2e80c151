// Strichartz-type experiments: coherent-state sharpness, random-data upper bounds,
// dispersion kernels and the Littlewood-Paley inequality.

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "common.hpp"
#include "cuspwave/bumps.hpp"
#include "cuspwave/errors.hpp"
#include "cuspwave/experiments.hpp"
#include "cuspwave/norms.hpp"
#include "cuspwave/semiclassics.hpp"

namespace cuspwave {

using detail::Stopwatch;

namespace {

Eigen::VectorXd row_mask(const RadialGrid& grid, double r1) {
  Eigen::VectorXd m(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i) m[static_cast<Eigen::Index>(i)] = grid.node(i) >= r1 ? 1.0 : 0.0;
  return m;
}

std::string fmt_g(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string pair_label(const AdmissiblePair& pair) {
  std::ostringstream os;
  os << "(" << pair.p << "," << pair.q << ")";
  return os.str();
}

// ---- coherent-state sharpness ----------------------------------------------

struct SharpnessRow {
  double N = 0.0;      // per pair
  double captured = 0.0;
  double sob_sigma = 0.0;
  double sob_quot = 0.0;
  std::size_t n = 0;
  Eigen::Index window = 0;
};

std::vector<ExperimentReport> sharpness_core(const std::vector<AdmissiblePair>& pairs,
                                             const std::vector<double>& h_list, double sigma,
                                             const ExperimentContext& ctx) {
  const WarpProfile profile = ctx.profile.value_or(WarpProfile::exp_cusp());
  if (profile.kind() != WarpKind::Exp || profile.r0() != 0.0) {
    throw PreconditionError("sharpness uses the exponential cusp with r0 = 0");
  }
  for (const auto& pair : pairs) {
    if (pair.family != PairFamily::SchrodingerSharp) throw PreconditionError("sharpness needs a Schrodinger pair");
    exponents(pair);
    if (!(pair.q > 2.0)) throw PreconditionError("sharpness needs q > 2");
  }
  if (h_list.size() < 4) throw PreconditionError("sharpness needs at least 4 values of h");
  const double c = ctx.get("c", 5.0);
  const double r1 = ctx.get("r1", 0.5);
  const double extra = ctx.get("rmax_extra", 3.0);
  const double lam_factor = ctx.get("lambda_factor", 6.0);
  const auto nt = static_cast<std::size_t>(ctx.get("time_nodes", 33));
  if (!(r1 > 0.0)) throw PreconditionError("sharpness needs r1 > 0");
  const Mode mode = make_mode(ctx.manifold, 0, 1, Parity::Cos);

  // per h: N for every pair, plus Sobolev norms
  std::vector<std::vector<double>> N(h_list.size(), std::vector<double>(pairs.size()));
  std::vector<SharpnessRow> rows(h_list.size());
  std::vector<double> sigma_q(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) sigma_q[k] = exponents(pairs[k]).sigma_s / 2.0;

  std::vector<std::vector<double>> quot_sob(h_list.size(), std::vector<double>(pairs.size()));
  parallel_for(h_list.size(), ctx.jobs, [&](std::size_t ih) {
    const double h = h_list[ih];
    const CoherentState cs{h};
    const RadialGrid grid = RadialGrid::with_step(0.0, cs.x0() + extra, h / c);
    const EigenSystem es =
        eigendecompose(discretize(profile, mode.mu, grid), SpectralWindow{-1.0, lam_factor / (h * h)});
    const Eigen::VectorXd r = grid.nodes();
    const Eigen::VectorXd u0 = cs.profile(r);
    const Eigen::VectorXd c0 = es.coefficients(u0);
    SharpnessRow& row = rows[ih];
    row.n = grid.n;
    row.window = es.size();
    row.captured = c0.squaredNorm() / std::pow(grid_norm(u0, grid.dr()), 2);
    double sob = 0.0;
    for (Eigen::Index j = 0; j < c0.size(); ++j) sob += std::pow(1.0 + es.values[j], sigma) * c0[j] * c0[j];
    row.sob_sigma = std::sqrt(sob);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      double s2 = 0.0;
      for (Eigen::Index j = 0; j < c0.size(); ++j) s2 += std::pow(1.0 + es.values[j], sigma_q[k]) * c0[j] * c0[j];
      quot_sob[ih][k] = std::sqrt(s2);
    }

    const Eigen::VectorXd mask = row_mask(grid, r1);
    std::vector<LqEvaluator> lq;
    for (const auto& pair : pairs) lq.emplace_back(profile, ctx.manifold, std::vector<Mode>{mode}, grid, pair.q);
    std::vector<std::vector<double>> norms(pairs.size());
    for (double s : detail::linspace(0.0, 1.0, nt)) {
      Eigen::VectorXcd ct(c0.size());
      for (Eigen::Index j = 0; j < c0.size(); ++j) ct[j] = c0[j] * multiplier(EvolutionKind::Schrodinger, s * h, es.values[j]);
      const Eigen::VectorXcd u = es.synthesize(ct).cwiseProduct(mask.cast<std::complex<double>>());
      for (std::size_t k = 0; k < pairs.size(); ++k) norms[k].push_back(lq[k].evaluate(u));
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) N[ih][k] = mixed_norm(norms[k], pairs[k].p, 1.0);
  });

  std::vector<ExperimentReport> out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    ExperimentReport rep;
    rep.name = "sharpness_p" + fmt_g(pairs[k].p) + "_q" + fmt_g(pairs[k].q);
    detail::set_profile(rep, profile);
    rep.settings["pair"] = pair_label(pairs[k]);
    rep.parameters = {{"p", {pairs[k].p}},  {"q", {pairs[k].q}},         {"sigma", {sigma}},
                      {"h_list", h_list},   {"c", {c}},                  {"r1", {r1}},
                      {"rmax_extra", {extra}}, {"lambda_factor", {lam_factor}}, {"time_nodes", {static_cast<double>(nt)}},
                      {"sigma_quotient", {sigma_q[k]}}};
    auto& tab = rep.table("norms", {"h", "grid_n", "window", "captured", "N", "h_sigma", "h_sigma_quotient", "quotient"});
    std::vector<double> Ns, sob, quot;
    double min_captured = 1.0;
    for (std::size_t ih = 0; ih < h_list.size(); ++ih) {
      Ns.push_back(N[ih][k]);
      sob.push_back(rows[ih].sob_sigma);
      quot.push_back(N[ih][k] / quot_sob[ih][k]);
      min_captured = std::min(min_captured, rows[ih].captured);
      tab.add({h_list[ih], static_cast<double>(rows[ih].n), static_cast<double>(rows[ih].window), rows[ih].captured,
               N[ih][k], rows[ih].sob_sigma, quot_sob[ih][k], quot.back()});
    }
    const double target = -3.0 / (2.0 * pairs[k].p);
    const auto& fN = rep.add_fit("log N vs log h", detail::zip(h_list, Ns));
    rep.check("slope_N", fN.slope, target * 1.15, target * 0.85);
    const auto& fS = rep.add_fit("log H^sigma vs log h", detail::zip(h_list, sob));
    rep.check("slope_h_sigma", fS.slope, -sigma * 1.10, -sigma * 0.90);
    const auto& fQ = rep.add_fit("log quotient vs log h", detail::zip(h_list, quot));
    rep.check("quotient_slope_negative", fQ.slope, -HUGE_VAL, 0.0);
    // quotient grows as h decreases (h_list is listed coarse to fine)
    std::vector<double> rev(quot.begin(), quot.end());
    if (h_list.front() < h_list.back()) std::reverse(rev.begin(), rev.end());
    rep.check("quotient_diverges", detail::strictly_increasing(rev) ? 1.0 : 0.0, 1.0, 1.0);
    rep.check("captured_mass", min_captured, 1.0 - 1e-8, 1.0 + 1e-8);
    out.push_back(std::move(rep));
  }
  return out;
}

// ---- random-data Strichartz ------------------------------------------------

struct RandomRow {
  double h = 0.0;
  std::size_t modes = 0;
  std::size_t n = 0;
  double r_min = 0.0, r_mean = 0.0, r_max = 0.0;
};

RandomRow random_strichartz_one(EvolutionKind kind, const WarpProfile& profile, const AdmissiblePair& pair, double h,
                                std::size_t ih, int samples, std::uint64_t seed, const ExperimentContext& ctx,
                                double T, double loss) {
  const double r1 = ctx.get("r1", 0.5);
  const double c = ctx.get("c", 5.0);
  const auto nt = static_cast<std::size_t>(ctx.get("time_nodes", 33));
  const double margin = ctx.get("rmax_margin", 1.5);
  if (!(r1 > profile.r0())) throw PreconditionError("random Strichartz needs r1 > r0");
  // modes whose classically allowed region at energy h^2 lambda <= 2 reaches r1
  const double mu_cap = std::min(ctx.mu_max.value_or(HUGE_VAL), std::sqrt(bumps::kSpecHi) * std::exp(-profile.phi(r1)) / h);
  std::vector<Mode> modes;
  for (const Mode& m : modes_up_to(ctx.manifold, mu_cap)) {
    if (m.mu > 0.0) modes.push_back(m);
  }
  RandomRow row;
  row.h = h;
  row.modes = modes.size();
  if (modes.empty()) return row;
  double mu_min = HUGE_VAL;
  for (const Mode& m : modes) mu_min = std::min(mu_min, m.mu);
  const double rmax = detail::warp_inverse(profile, std::log(std::sqrt(bumps::kSpecHi) / (h * mu_min))) + margin;
  const RadialGrid grid = RadialGrid::with_step(profile.r0(), rmax, h / c);
  row.n = grid.n;
  const auto n = static_cast<Eigen::Index>(grid.n);
  const auto K = static_cast<Eigen::Index>(modes.size());
  std::size_t first = 0;
  while (first < grid.n && grid.node(first) < r1) ++first;
  const Eigen::Index rows = n - static_cast<Eigen::Index>(first);

  // one eigensystem per distinct mu, restricted to r >= r1
  struct Block {
    double mu;
    Eigen::MatrixXd V;  // rows >= r1
    Eigen::VectorXd values;
    Eigen::VectorXd amp;  // phi_spec(h^2 lambda)
  };
  std::vector<Block> blocks;
  std::vector<std::size_t> block_of(modes.size());
  for (std::size_t k = 0; k < modes.size(); ++k) {
    if (blocks.empty() || blocks.back().mu != modes[k].mu) {
      const EigenSystem es = eigendecompose(discretize(profile, modes[k].mu, grid),
                                            SpectralWindow{bumps::kSpecLo / (h * h), bumps::kSpecHi / (h * h)});
      Block b{modes[k].mu, es.vectors.bottomRows(rows), es.values, Eigen::VectorXd(es.size())};
      for (Eigen::Index j = 0; j < es.size(); ++j) b.amp[j] = bumps::phi_spec(h * h * es.values[j]);
      blocks.push_back(std::move(b));
    }
    block_of[k] = blocks.size() - 1;
  }

  const LqEvaluator lq(profile, ctx.manifold, modes, grid, pair.q);
  const std::vector<double> times = detail::linspace(0.0, T, nt);
  std::vector<double> R;
  for (int s = 0; s < samples; ++s) {
    std::vector<Eigen::MatrixXcd> U(nt, Eigen::MatrixXcd::Zero(n, K));
    double l2 = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const Block& b = blocks[block_of[k]];
      std::mt19937_64 rng(stream_seed(seed, ih, static_cast<std::uint64_t>(s), modes[k].k));
      const Eigen::VectorXcd C = detail::complex_gaussian(rng, b.values.size()).cwiseProduct(b.amp.cast<std::complex<double>>());
      l2 += C.squaredNorm();
      // V is real: two real products instead of one complex one
      const auto nti = static_cast<Eigen::Index>(nt);
      Eigen::MatrixXd X(b.values.size(), 2 * nti);
      for (Eigen::Index it = 0; it < nti; ++it) {
        for (Eigen::Index j = 0; j < b.values.size(); ++j) {
          const std::complex<double> z = C[j] * multiplier(kind, times[static_cast<std::size_t>(it)], b.values[j]);
          X(j, it) = z.real();
          X(j, nti + it) = z.imag();
        }
      }
      const Eigen::MatrixXd Y = b.V * X;
      for (Eigen::Index it = 0; it < nti; ++it) {
        auto col = U[static_cast<std::size_t>(it)].col(static_cast<Eigen::Index>(k)).tail(rows);
        col.real() = Y.col(it);
        col.imag() = Y.col(nti + it);
      }
    }
    std::vector<double> norms;
    for (std::size_t it = 0; it < nt; ++it) norms.push_back(lq.evaluate(U[it]));
    R.push_back(mixed_norm(norms, pair.p, T) / (std::pow(h, -loss) * std::sqrt(l2)));
  }
  row.r_min = *std::min_element(R.begin(), R.end());
  row.r_max = *std::max_element(R.begin(), R.end());
  double sum = 0.0;
  for (double v : R) sum += v;
  row.r_mean = sum / static_cast<double>(R.size());
  return row;
}

ExperimentReport random_strichartz(EvolutionKind kind, const std::string& name, const WarpProfile& profile,
                                   const AdmissiblePair& pair, const std::vector<double>& h_list, int samples,
                                   std::uint64_t seed, const ExperimentContext& ctx) {
  Stopwatch sw;
  const LossExponents ex = exponents(pair);
  const bool schr = kind == EvolutionKind::Schrodinger;
  if (schr != (pair.family == PairFamily::SchrodingerSharp)) throw PreconditionError(name + ": pair family does not match the flow");
  if (samples < 1) throw PreconditionError(name + ": need at least one sample");
  const double loss = schr ? ex.sigma_s : ex.sigma_w;
  const double t0 = ctx.get("t0", 1.0);
  ExperimentReport rep;
  rep.name = name;
  detail::set_profile(rep, profile);
  rep.parameters = {{"p", {pair.p}},
                    {"q", {pair.q}},
                    {"h_list", h_list},
                    {"sample_count", {static_cast<double>(samples)}},
                    {"seed", {static_cast<double>(seed)}},
                    {"loss", {loss}},
                    {"r1", {ctx.get("r1", 0.5)}},
                    {"c", {ctx.get("c", 5.0)}},
                    {"time_nodes", {ctx.get("time_nodes", 33)}}};
  if (!schr) rep.parameters["t0"] = {t0};
  rep.settings["statistic"] = "R(h) = max over samples";
  std::vector<RandomRow> rows(h_list.size());
  parallel_for(h_list.size(), ctx.jobs, [&](std::size_t ih) {
    const double h = h_list[ih];
    rows[ih] = random_strichartz_one(kind, profile, pair, h, ih, samples, seed, ctx, schr ? h : t0, loss);
  });
  auto& tab = rep.table("quotient", {"h", "modes", "grid_n", "R_min", "R_mean", "R_max"});
  std::vector<double> hs, Rmax, Rmean;
  for (const auto& row : rows) {
    if (row.modes == 0) {
      std::ostringstream os;
      os << "h = " << row.h << " skipped: no angular mode reaches r1";
      rep.notes.push_back(os.str());
      continue;
    }
    tab.add({row.h, static_cast<double>(row.modes), static_cast<double>(row.n), row.r_min, row.r_mean, row.r_max});
    hs.push_back(row.h);
    Rmax.push_back(row.r_max);
    Rmean.push_back(row.r_mean);
  }
  if (hs.size() < 2) throw PreconditionError(name + ": fewer than two usable values of h");
  const double ratio = *std::max_element(Rmax.begin(), Rmax.end()) / *std::min_element(Rmax.begin(), Rmax.end());
  rep.check("max_over_min_R", ratio, 0.0, 3.0);
  if (hs.size() >= 4) {
    rep.add_fit("log R_max vs log h", detail::zip(hs, Rmax), false);
    rep.add_fit("log R_mean vs log h", detail::zip(hs, Rmean), false);
  }
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

}  // namespace

ExperimentReport exp_sharpness(const AdmissiblePair& pair, const std::vector<double>& h_list, double sigma,
                               const ExperimentContext& ctx) {
  Stopwatch sw;
  ExperimentReport rep = sharpness_core({pair}, h_list, sigma, ctx).front();
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

std::vector<ExperimentReport> run_sharpness_pairs(const std::vector<AdmissiblePair>& pairs,
                                                  const std::vector<double>& h_list, double sigma,
                                                  const ExperimentContext& ctx) {
  Stopwatch sw;
  auto reps = sharpness_core(pairs, h_list, sigma, ctx);
  for (auto& r : reps) {
    r.seconds = sw.seconds();
    r.finalize();
  }
  return reps;
}

ExperimentReport exp_wave_strichartz(const WarpProfile& profile, const AdmissiblePair& pair,
                                     const std::vector<double>& h_list, int sample_count, std::uint64_t seed,
                                     const ExperimentContext& ctx) {
  return random_strichartz(EvolutionKind::CosWave, "wave_strichartz", profile, pair, h_list, sample_count, seed, ctx);
}

ExperimentReport exp_schrodinger_semiclassical(const WarpProfile& profile, const AdmissiblePair& pair,
                                               const std::vector<double>& h_list, int sample_count,
                                               std::uint64_t seed, const ExperimentContext& ctx) {
  return random_strichartz(EvolutionKind::Schrodinger, "schrodinger_semiclassical", profile, pair, h_list,
                           sample_count, seed, ctx);
}

// ---- dispersion --------------------------------------------------------------

ExperimentReport exp_dispersion(const WarpProfile& profile, DispersionKind nu, const std::vector<double>& h_list,
                                const std::vector<double>& t_list, double L, const std::vector<double>& mu_list,
                                const ExperimentContext& ctx) {
  Stopwatch sw;
  const bool schr = nu == DispersionKind::Schrodinger;
  const double c = ctx.get("c", 5.0);
  const double left = ctx.get("left_margin", 0.5);
  const double wall = ctx.get("wall", 3.0);  // right end where h mu e^phi reaches this value
  const auto sub = static_cast<std::size_t>(ctx.get("column_stride", 4));
  ExperimentReport rep;
  rep.name = schr ? "dispersion_schrodinger" : "dispersion_halfwave";
  detail::set_profile(rep, profile);
  rep.settings["flow"] = schr ? "Schrodinger" : "HalfWave";
  rep.parameters = {{"h_list", h_list}, {"t_list", t_list}, {"L", {L}},           {"mu_list", mu_list},
                    {"c", {c}},         {"left_margin", {left}}, {"wall", {wall}}, {"column_stride", {static_cast<double>(sub)}}};
  if (t_list.size() < 4) throw PreconditionError("dispersion needs at least 4 times");
  if (L - left < profile.r0()) throw PreconditionError("dispersion: shell too close to r0");

  struct Job {
    double h, mu;
  };
  std::vector<Job> jobs;
  for (double h : h_list) {
    for (double mu : mu_list) {
      const double eps = h * mu * std::exp(profile.phi(L));
      if (!(eps <= std::sqrt(bumps::kSpecHi))) {
        std::ostringstream os;
        os << "dispersion: h mu e^phi(L) = " << eps << " lies in the forbidden region (> sqrt 2)";
        throw PreconditionError(os.str());
      }
      jobs.push_back({h, mu});
    }
  }
  std::vector<std::vector<double>> sup(jobs.size());
  std::vector<std::size_t> sizes(jobs.size());
  parallel_for(jobs.size(), ctx.jobs, [&](std::size_t ij) {
    const double h = jobs[ij].h;
    const double mu = jobs[ij].mu;
    const WarpProfile cut = detail::truncated(profile, L - left);
    double rmax = L + 1.0 + left;
    if (mu > 0.0) rmax = std::max(rmax, detail::warp_inverse(profile, std::log(wall / (h * mu))));
    const RadialGrid grid = RadialGrid::with_step(cut.r0(), rmax, h / c);
    sizes[ij] = grid.n;
    const EigenSystem es = eigendecompose(discretize(cut, mu, grid),
                                          SpectralWindow{bumps::kSpecLo / (h * h), bumps::kSpecHi / (h * h)});
    std::vector<Eigen::Index> shell;
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double r = grid.node(i);
      if (r >= L && r <= L + 1.0) shell.push_back(static_cast<Eigen::Index>(i));
    }
    Eigen::MatrixXd VL(static_cast<Eigen::Index>(shell.size()), es.size());
    for (std::size_t a = 0; a < shell.size(); ++a) VL.row(static_cast<Eigen::Index>(a)) = es.vectors.row(shell[a]);
    Eigen::MatrixXd VC(static_cast<Eigen::Index>((shell.size() + sub - 1) / sub), es.size());
    for (std::size_t a = 0; a < shell.size(); a += sub) VC.row(static_cast<Eigen::Index>(a / sub)) = VL.row(static_cast<Eigen::Index>(a));
    const double wphi = std::exp(profile.phi(L));
    for (double tau : t_list) {
      Eigen::VectorXcd m(es.size());
      for (Eigen::Index j = 0; j < es.size(); ++j) {
        const double a = bumps::phi_spec(h * h * es.values[j]);
        m[j] = a * a * (schr ? multiplier(EvolutionKind::Schrodinger, tau * h, es.values[j])
                             : multiplier(EvolutionKind::HalfWave, tau, es.values[j]));
      }
      const Eigen::MatrixXd VCt = VC.transpose();
      const Eigen::MatrixXd Kre = (VL * m.real().asDiagonal()) * VCt;
      const Eigen::MatrixXd Kim = (VL * m.imag().asDiagonal()) * VCt;
      sup[ij].push_back(wphi * std::sqrt((Kre.array().square() + Kim.array().square()).maxCoeff()));
    }
  });

  auto& tab = rep.table("kernel", {"h", "mu", "tau", "grid_n", "weighted_sup", "prefactor"});
  std::vector<double> prefactors;
  for (std::size_t ij = 0; ij < jobs.size(); ++ij) {
    double logsum = 0.0;
    for (std::size_t it = 0; it < t_list.size(); ++it) {
      const double pref = sup[ij][it] * std::sqrt(t_list[it]);
      logsum += std::log(pref);
      tab.add({jobs[ij].h, jobs[ij].mu, t_list[it], static_cast<double>(sizes[ij]), sup[ij][it], pref});
    }
    prefactors.push_back(std::exp(logsum / static_cast<double>(t_list.size())));
    std::ostringstream label;
    label << "log sup vs log tau (h=" << jobs[ij].h << ", mu=" << jobs[ij].mu << ")";
    const auto& f = rep.add_fit(label.str(), detail::zip(t_list, sup[ij]));
    std::ostringstream key;
    key << "slope_h" << jobs[ij].h << "_mu" << jobs[ij].mu;
    rep.check(key.str(), f.slope, -0.6, -0.4);
  }
  auto& ptab = rep.table("prefactor", {"h", "mu", "prefactor", "prefactor_times_mu"});
  for (std::size_t ij = 0; ij < jobs.size(); ++ij) {
    ptab.add({jobs[ij].h, jobs[ij].mu, prefactors[ij], prefactors[ij] * jobs[ij].mu});
  }
  if (!schr) {
    // D ~ mu^{-1}: mu * prefactor constant across mu at each h
    for (double h : h_list) {
      double ref = 0.0, ref_mu = 0.0;
      for (std::size_t ij = 0; ij < jobs.size(); ++ij) {
        if (jobs[ij].h != h) continue;
        if (ref == 0.0) {
          ref = prefactors[ij] * jobs[ij].mu;
          ref_mu = jobs[ij].mu;
          continue;
        }
        std::ostringstream key;
        key << "prefactor_ratio_h" << h << "_mu" << jobs[ij].mu << "_vs_mu" << ref_mu;
        rep.check(key.str(), prefactors[ij] * jobs[ij].mu / ref, 0.75, 1.25);
      }
    }
  }
  if (h_list.size() >= 4 && mu_list.size() == 1) {
    rep.add_fit("log prefactor vs log h", detail::zip(h_list, prefactors), false);
  }
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

// ---- Littlewood-Paley --------------------------------------------------------

ExperimentReport exp_littlewood_paley(const WarpProfile& profile, double q, int sample_count, std::uint64_t seed,
                                      const ExperimentContext& ctx) {
  Stopwatch sw;
  if (!(q >= 2.0 && q <= 8.0)) throw PreconditionError("littlewood_paley needs q in [2, 8]");
  const double rmax = ctx.rmax.value_or(ctx.get("rmax", 8.0));
  const double mu_max = ctx.mu_max.value_or(ctx.get("mu_max", 10.0));
  const double band_limit = ctx.get("band_limit", 4096.0);
  const double r1 = ctx.get("r1", profile.r0() + 1.0);
  const auto l_max_req = static_cast<int>(ctx.get("l_max", 0.0));
  ExperimentReport rep;
  rep.name = "littlewood_paley";
  detail::set_profile(rep, profile);
  rep.parameters = {{"q", {q}},           {"sample_count", {static_cast<double>(sample_count)}},
                    {"seed", {static_cast<double>(seed)}}, {"rmax", {rmax}}, {"mu_max", {mu_max}},
                    {"band_limit", {band_limit}}, {"r1", {r1}}};
  const RadialGrid grid = ctx.n ? RadialGrid::make(profile.r0(), rmax, *ctx.n)
                                : RadialGrid::with_step(profile.r0(), rmax, ctx.get("dr", 0.02));
  const std::vector<Mode> modes = modes_up_to(ctx.manifold, mu_max);
  std::vector<EigenSystem> es;
  double lam_top = 0.0;
  for (const Mode& m : modes) {
    if (!es.empty() && es.back().mu == m.mu) {
      es.push_back(es.back());
    } else {
      es.push_back(eigendecompose(discretize(profile, m.mu, grid)));
    }
    lam_top = std::max(lam_top, es.back().values.maxCoeff());
  }
  // smallest l_max with 2^{l_max} >= every discrete eigenvalue
  const int l_need = std::max(1, static_cast<int>(std::ceil(std::log2(std::max(lam_top, 1.0)))));
  const int l_max = l_max_req > 0 ? l_max_req : l_need;
  rep.parameters["l_max"] = {static_cast<double>(l_max)};
  if (l_max < l_need) {
    std::ostringstream os;
    os << "littlewood_paley: l_max = " << l_max << " does not resolve the spectral range (needs " << l_need << ")";
    throw PreconditionError(os.str());
  }
  auto band = [](int l, double lambda) { return l == 0 ? bumps::lp_low(lambda) : bumps::lp_band(std::ldexp(lambda, -l)); };
  double residual = 0.0;
  for (const auto& e : es) {
    for (Eigen::Index j = 0; j < e.size(); ++j) {
      double s = 0.0;
      for (int l = 0; l <= l_max; ++l) s += band(l, e.values[j]);
      residual = std::max(residual, std::fabs(1.0 - s));
    }
  }
  rep.check("partition_residual", residual, 0.0, 1e-12);

  // Pi^c xi psi
  Eigen::VectorXd xi(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i) xi[static_cast<Eigen::Index>(i)] = bumps::smooth_step(grid.node(i) - r1);
  const std::vector<bool> keep = project(modes, Projection::PiC);
  const LqEvaluator lq(profile, ctx.manifold, modes, grid, q);
  const auto K = static_cast<Eigen::Index>(modes.size());
  const auto n = static_cast<Eigen::Index>(grid.n);

  auto& tab = rep.table("samples", {"sample", "lhs", "band_sum", "l2", "ratio"});
  std::vector<double> ratios(static_cast<std::size_t>(sample_count));
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(sample_count));
  parallel_for(static_cast<std::size_t>(sample_count), ctx.jobs, [&](std::size_t s) {
    std::vector<Eigen::VectorXcd> C(modes.size());
    double l2 = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      std::mt19937_64 rng(stream_seed(seed, s, modes[k].k));
      C[k] = detail::complex_gaussian(rng, es[k].size());
      for (Eigen::Index j = 0; j < C[k].size(); ++j) {
        if (es[k].values[j] > band_limit) C[k][j] = 0.0;
      }
      l2 += C[k].squaredNorm();
    }
    auto field = [&](int l) {
      Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, K);
      for (std::size_t k = 0; k < modes.size(); ++k) {
        if (!keep[k]) continue;
        Eigen::VectorXcd c = C[k];
        if (l >= 0) {
          for (Eigen::Index j = 0; j < c.size(); ++j) c[j] *= band(l, es[k].values[j]);
        }
        U.col(static_cast<Eigen::Index>(k)) = es[k].synthesize(c).cwiseProduct(xi.cast<std::complex<double>>());
      }
      return U;
    };
    const double lhs = lq.evaluate(field(-1));
    double sq = 0.0;
    for (int l = 1; l <= l_max; ++l) {
      if (std::ldexp(1.0, l - 1) > band_limit) break;
      const double v = lq.evaluate(field(l));
      sq += v * v;
    }
    const double rhs = std::sqrt(sq) + std::sqrt(l2);
    ratios[s] = lhs / rhs;
    rows[s] = {static_cast<double>(s), lhs, std::sqrt(sq), std::sqrt(l2), lhs / rhs};
  });
  for (auto& r : rows) tab.add(r);
  rep.check("max_ratio", *std::max_element(ratios.begin(), ratios.end()), 0.0, 10.0);
  rep.seconds = sw.seconds();
  rep.finalize();
  return rep;
}

}  // namespace cuspwave
