#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "cuspwave/angular.hpp"
#include "cuspwave/geometry.hpp"
#include "cuspwave/propagate.hpp"
#include "cuspwave/radial.hpp"

namespace cuspwave {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Composite Simpson weights for `points` equispaced samples of spacing h.
// An even number of intervals uses plain Simpson, an odd number closes with the 3/8 rule.
std::vector<double> simpson_weights(std::size_t points, double h);

// (int int |psi|^q e^{-phi} dr dtheta)^{1/q} with psi = e^{phi/2} u.
// Trapezoid in theta, Simpson in r (Dirichlet zeros at r0 and rmax), q = inf is the grid max.
// Precomputes everything that does not depend on the state; reuse it across time nodes.
class LqEvaluator {
 public:
  LqEvaluator(const WarpProfile& profile, const AngularManifold& manifold, const std::vector<Mode>& modes,
              const RadialGrid& grid, double q, std::size_t theta_points = 0);

  double operator()(const CuspState& state) const;
  // U has one column per mode (same order as `modes`) and one row per grid node.
  double evaluate(const Eigen::MatrixXcd& U) const;
  double q() const { return q_; }

 private:
  double q_;
  std::size_t first_row_ = 0;
  std::vector<std::vector<Eigen::Index>> component_modes_;
  std::vector<Eigen::MatrixXd> basis_;  // per component: modes_c x N
  std::vector<double> theta_weight_;    // per component: l / N
  Eigen::VectorXd row_weight_;          // Simpson weight times e^{(q/2 - 1) phi}
  Eigen::VectorXd half_density_;        // e^{phi/2}, used for q = inf
};

double lq_spatial(const CuspState& state, double q, const WarpProfile& profile, const AngularManifold& manifold,
                  std::size_t theta_points = 0);

// (sum_k ||(1 + Lambda_k)^{sigma/2} c_k||^2)^{1/2}.
double sobolev(const CuspState& state, double sigma, const std::vector<const EigenSystem*>& eigensystems);
double sobolev(const CuspState& state, double sigma, const std::vector<EigenSystem>& eigensystems);

// (sum_j w_j f_j^p)^{1/p} with Simpson weights on a uniform grid of [0, T]; p = inf is the max.
double mixed_norm(const std::vector<double>& spatial_norms, double p, double T);

enum class PairFamily { SchrodingerSharp, WaveSharp };

struct AdmissiblePair {
  double p;
  double q;
  PairFamily family;
};

struct LossExponents {
  double sigma_s;
  double sigma_w;
};

LossExponents exponents(const AdmissiblePair& pair);

}  // namespace cuspwave
