#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace cuspwave {

// Cross-section: disjoint circles of the given circumferences.
struct AngularManifold {
  std::vector<double> circumferences;

  static AngularManifold unit_circle();
  std::size_t k0() const { return circumferences.size(); }
};

enum class Parity { Const, Cos, Sin };

struct Mode {
  std::size_t k = 0;          // global index in sorted order
  std::size_t component = 0;  // which circle
  int m = 0;                  // angular wavenumber
  Parity parity = Parity::Const;
  double mu = 0.0;            // 2 pi m / l

  bool operator==(const Mode&) const = default;
};

// Sorted by mu, ties by (component, m, Cos before Sin). Exactly k0 zero modes.
std::vector<Mode> modes_up_to(const AngularManifold& manifold, double mu_max);

// Mode with the given (component, m, parity); mu filled from the manifold.
Mode make_mode(const AngularManifold& manifold, std::size_t component, int m, Parity parity);

enum class Projection { Pi, PiC };

std::vector<bool> project(const std::vector<Mode>& modes, Projection which);
// Restricts an existing mask further.
std::vector<bool> project(const std::vector<Mode>& modes, const std::vector<bool>& mask, Projection which);

// L^2(dtheta)-normalized basis function e_k(theta) on its component.
double basis_value(const Mode& mode, const AngularManifold& manifold, double theta);

// theta grids: N uniform points per component, theta_j = j l / N.
// Values are laid out component by component: values[c] has N entries.
using AngularValues = std::vector<std::vector<std::complex<double>>>;

std::size_t min_theta_points(const std::vector<Mode>& modes);
std::size_t default_theta_points(const std::vector<Mode>& modes);

// Basis matrix B (modes x N) for one component; rows of modes on other components are zero.
Eigen::MatrixXd basis_matrix(const std::vector<Mode>& modes, const AngularManifold& manifold,
                             std::size_t component, std::size_t theta_points);

AngularValues synthesize(const std::vector<Mode>& modes, const AngularManifold& manifold,
                         const std::vector<std::complex<double>>& coeffs, std::size_t theta_points);

std::vector<std::complex<double>> analyze(const std::vector<Mode>& modes, const AngularManifold& manifold,
                                          const AngularValues& values);

}  // namespace cuspwave
