#include "cuspwave/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cuspwave/errors.hpp"

namespace cuspwave {

std::vector<double> simpson_weights(std::size_t points, double h) {
  if (points < 2) throw PreconditionError("simpson_weights: need at least 2 points");
  std::vector<double> w(points, 0.0);
  const std::size_t intervals = points - 1;
  if (intervals == 1) {
    w[0] = w[1] = h / 2.0;
    return w;
  }
  std::size_t simpson_end = intervals;
  if (intervals % 2) {
    simpson_end = intervals - 3;
    for (std::size_t j = 0; j < 4; ++j) w[simpson_end + j] += 3.0 * h / 8.0 * (j == 0 || j == 3 ? 1.0 : 3.0);
  }
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  return w;
}

LqEvaluator::LqEvaluator(const WarpProfile& profile, const AngularManifold& manifold, const std::vector<Mode>& modes,
                         const RadialGrid& grid, double q, std::size_t theta_points)
    : q_(q) {
  if (!(q >= 2.0)) throw PreconditionError("lq_spatial: q must be >= 2");
  if (std::isfinite(q) && q > 8.0) throw PreconditionError("lq_spatial: finite q is capped at 8");
  if (theta_points == 0) theta_points = default_theta_points(modes);
  if (theta_points < min_theta_points(modes)) throw PreconditionError("lq_spatial: theta grid too coarse");
  const std::size_t nc = manifold.circumferences.size();
  component_modes_.resize(nc);
  for (std::size_t k = 0; k < modes.size(); ++k) component_modes_.at(modes[k].component).push_back(static_cast<Eigen::Index>(k));
  for (std::size_t c = 0; c < nc; ++c) {
    const Eigen::MatrixXd full = basis_matrix(modes, manifold, c, theta_points);
    Eigen::MatrixXd b(static_cast<Eigen::Index>(component_modes_[c].size()), full.cols());
    for (std::size_t j = 0; j < component_modes_[c].size(); ++j) b.row(static_cast<Eigen::Index>(j)) = full.row(component_modes_[c][j]);
    basis_.push_back(std::move(b));
    theta_weight_.push_back(manifold.circumferences[c] / static_cast<double>(theta_points));
  }
  // nodes 0 and n+1 carry the Dirichlet zeros
  const std::vector<double> sw = simpson_weights(grid.n + 2, grid.dr());
  row_weight_.resize(static_cast<Eigen::Index>(grid.n));
  half_density_.resize(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double phi = profile.phi(grid.node(i));
    row_weight_[static_cast<Eigen::Index>(i)] = std::isfinite(q) ? sw[i + 1] * std::exp((q / 2.0 - 1.0) * phi) : 0.0;
    half_density_[static_cast<Eigen::Index>(i)] = std::exp(phi / 2.0);
  }
}

double LqEvaluator::evaluate(const Eigen::MatrixXcd& U) const {
  const Eigen::Index n = row_weight_.size();
  if (U.rows() != n) throw PreconditionError("lq_spatial: row count mismatch");
  const bool inf = !std::isfinite(q_);
  const bool quartic = q_ == 4.0;
  const double half_q = q_ / 2.0;
  constexpr Eigen::Index kBlock = 1024;
  double acc = 0.0;
  for (std::size_t c = 0; c < basis_.size(); ++c) {
    const auto& idx = component_modes_[c];
    if (idx.empty()) continue;
    const Eigen::MatrixXd& B = basis_[c];
    Eigen::MatrixXd Ur(kBlock, static_cast<Eigen::Index>(idx.size()));
    Eigen::MatrixXd Ui(kBlock, static_cast<Eigen::Index>(idx.size()));
    for (Eigen::Index start = 0; start < n; start += kBlock) {
      const Eigen::Index rows = std::min(kBlock, n - start);
      // skip blocks that are identically zero (restricted states)
      bool any = false;
      for (std::size_t j = 0; j < idx.size() && !any; ++j) any = !U.col(idx[j]).segment(start, rows).isZero(0.0);
      if (!any) continue;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        Ur.col(static_cast<Eigen::Index>(j)).head(rows) = U.col(idx[j]).segment(start, rows).real();
        Ui.col(static_cast<Eigen::Index>(j)).head(rows) = U.col(idx[j]).segment(start, rows).imag();
      }
      const Eigen::MatrixXd Pr = Ur.topRows(rows) * B;
      const Eigen::MatrixXd Pi = Ui.topRows(rows) * B;
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (inf) {
          const double m2 = (Pr.row(i).array().square() + Pi.row(i).array().square()).maxCoeff();
          acc = std::max(acc, std::sqrt(m2) * half_density_[start + i]);
          continue;
        }
        const double rw = row_weight_[start + i];
        if (rw == 0.0) continue;
        double s = 0.0;
        for (Eigen::Index j = 0; j < B.cols(); ++j) {
          const double a2 = Pr(i, j) * Pr(i, j) + Pi(i, j) * Pi(i, j);
          s += quartic ? a2 * a2 : std::pow(a2, half_q);
        }
        acc += rw * s * theta_weight_[c];
      }
    }
  }
  return inf ? acc : std::pow(acc, 1.0 / q_);
}

double LqEvaluator::operator()(const CuspState& state) const {
  Eigen::MatrixXcd U(static_cast<Eigen::Index>(state.grid.n), static_cast<Eigen::Index>(state.u.size()));
  for (std::size_t k = 0; k < state.u.size(); ++k) U.col(static_cast<Eigen::Index>(k)) = state.u[k];
  return evaluate(U);
}

double lq_spatial(const CuspState& state, double q, const WarpProfile& profile, const AngularManifold& manifold,
                  std::size_t theta_points) {
  if (state.modes.empty()) return 0.0;
  return LqEvaluator(profile, manifold, state.modes, state.grid, q, theta_points)(state);
}

double sobolev(const CuspState& state, double sigma, const std::vector<const EigenSystem*>& eigensystems) {
  if (!(sigma >= 0.0 && sigma <= 8.0)) throw PreconditionError("sobolev: sigma must lie in [0, 8]");
  if (eigensystems.size() != state.modes.size()) throw PreconditionError("sobolev: one eigensystem per mode required");
  double acc = 0.0;
  for (std::size_t k = 0; k < state.modes.size(); ++k) {
    const Eigen::VectorXcd c = eigensystems[k]->coefficients(state.u[k]);
    for (Eigen::Index j = 0; j < c.size(); ++j) acc += std::pow(1.0 + eigensystems[k]->values[j], sigma) * std::norm(c[j]);
  }
  return std::sqrt(acc);
}

double sobolev(const CuspState& state, double sigma, const std::vector<EigenSystem>& eigensystems) {
  std::vector<const EigenSystem*> ptrs;
  for (const auto& es : eigensystems) ptrs.push_back(&es);
  return sobolev(state, sigma, ptrs);
}

double mixed_norm(const std::vector<double>& spatial_norms, double p, double T) {
  if (spatial_norms.size() < 3) throw PreconditionError("mixed_norm: need at least 3 time nodes");
  if (!std::isfinite(p)) return *std::max_element(spatial_norms.begin(), spatial_norms.end());
  const std::vector<double> w = simpson_weights(spatial_norms.size(), T / static_cast<double>(spatial_norms.size() - 1));
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * std::pow(spatial_norms[j], p);
  return std::pow(acc, 1.0 / p);
}

LossExponents exponents(const AdmissiblePair& pair) {
  const double p = pair.p;
  const double q = pair.q;
  if (!(p >= 2.0) || !(q >= 2.0)) throw PreconditionError("admissible pair needs p, q >= 2");
  const double inv_q = std::isfinite(q) ? 1.0 / q : 0.0;
  const double inv_p = std::isfinite(p) ? 1.0 / p : 0.0;
  if (pair.family == PairFamily::SchrodingerSharp) {
    if (std::fabs(inv_p + inv_q - 0.5) > 1e-12) {
      std::ostringstream os;
      os << "inadmissible Schrodinger pair (" << p << ", " << q << "): 1/p + 1/q = 1/2 violated";
      throw PreconditionError(os.str());
    }
  } else if (std::fabs(2.0 * inv_p + inv_q - 0.5) > 1e-12) {
    std::ostringstream os;
    os << "inadmissible wave pair (" << p << ", " << q << "): 2/p + 1/q = 1/2 violated";
    throw PreconditionError(os.str());
  }
  return {0.5 * (0.5 - inv_q), 1.5 * (0.5 - inv_q)};
}

}  // namespace cuspwave
