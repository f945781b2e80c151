#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cuspwave/angular.hpp"
#include "cuspwave/geometry.hpp"

namespace cuspwave {

// Interior nodes r_i = r0 + i dr, i = 1..n, dr = (rmax - r0)/(n + 1).
struct RadialGrid {
  double r0 = 0.0;
  double rmax = 1.0;
  std::size_t n = 16;

  static RadialGrid make(double r0, double rmax, std::size_t n);
  // Smallest n with dr <= dr_max.
  static RadialGrid with_step(double r0, double rmax, double dr_max);

  double dr() const { return (rmax - r0) / static_cast<double>(n + 1); }
  // 0-based: node(0) is r_1.
  double node(std::size_t i) const { return r0 + static_cast<double>(i + 1) * dr(); }
  Eigen::VectorXd nodes() const;

  bool operator==(const RadialGrid&) const = default;
};

struct RadialOperator {
  RadialGrid grid;
  double mu = 0.0;
  Eigen::VectorXd diag;
  double offdiag = 0.0;

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const;
  double max_abs_diag() const;
};

// -d^2/dr^2 + mu^2 e^{2 phi} + w, Dirichlet at r0 and rmax.
RadialOperator discretize(const WarpProfile& profile, double mu, const RadialGrid& grid);

// Eigenvalues in (lo, hi].
struct SpectralWindow {
  double lo;
  double hi;
};

// Columns of vectors are orthonormal for <u, v> = dr sum u_i v_i.
// complete == false means only the eigenpairs inside a spectral window are stored.
struct EigenSystem {
  RadialGrid grid;
  double mu = 0.0;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  bool complete = true;
  // eigenvalues outside (window_lo, window_hi] were not computed
  double window_lo = -std::numeric_limits<double>::infinity();
  double window_hi = std::numeric_limits<double>::infinity();
  double tol_neg = 0.0;

  bool covers(double lo, double hi) const { return complete || (window_lo <= lo && window_hi >= hi); }

  Eigen::Index size() const { return values.size(); }
  Eigen::VectorXd coefficients(const Eigen::VectorXd& u) const;
  Eigen::VectorXcd coefficients(const Eigen::VectorXcd& u) const;
  Eigen::VectorXd synthesize(const Eigen::VectorXd& c) const;
  Eigen::VectorXcd synthesize(const Eigen::VectorXcd& c) const;
  // Columns are coefficient vectors; returns grid vectors column by column.
  Eigen::MatrixXcd synthesize(const Eigen::MatrixXcd& c) const;
};

EigenSystem eigendecompose(const RadialOperator& op);
EigenSystem eigendecompose(const RadialOperator& op, SpectralWindow window);
// Smallest eigenvalue only.
double lowest_eigenvalue(const RadialOperator& op);

Eigen::VectorXd apply_function(const EigenSystem& es, const std::function<double(double)>& f,
                               const Eigen::VectorXd& u);
Eigen::VectorXcd apply_function(const EigenSystem& es, const std::function<std::complex<double>(double)>& f,
                                const Eigen::VectorXcd& u);

// (A + shift I) x = rhs by the Thomas algorithm.
Eigen::VectorXd solve_shifted(const RadialOperator& op, double shift, const Eigen::VectorXd& rhs);

// Central difference with zero Dirichlet values outside the grid.
Eigen::VectorXd central_derivative(const Eigen::VectorXd& u, double dr);

// L^2(dr) norm of a grid vector.
double grid_norm(const Eigen::VectorXd& u, double dr);
double grid_norm(const Eigen::VectorXcd& u, double dr);

// max over random unit u and modes with mu > 0 of
//   || mu^{2 N2} e^{2 N2 phi} D_r^{N1} xi (p_k + 1)^{-N} u || / ||u||,
// xi a smooth step rising on [r1, r1 + 1].
double elliptic_weight_check(const WarpProfile& profile, const RadialGrid& grid, const std::vector<Mode>& modes,
                             int N, int N1, int N2, int samples, std::uint64_t seed, double r1);

// max over random unit u and modes with mu > 0 of sup_r |e^{(2N + 1/2) phi} (p_k + 1)^{-2N} u| / ||u||.
double rough_sobolev_check(const WarpProfile& profile, const RadialGrid& grid, const std::vector<Mode>& modes,
                           int N, int samples, std::uint64_t seed);

// Binary cache: "CUSPEIG1", r0, rmax, mu, n, eigenvalues, n x n vectors row-major, little-endian.
void write_eigensystem(const std::string& path, const EigenSystem& es);
EigenSystem read_eigensystem(const std::string& path);

}  // namespace cuspwave
