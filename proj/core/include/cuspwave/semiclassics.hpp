#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "cuspwave/geometry.hpp"
#include "cuspwave/radial.hpp"

namespace cuspwave {

// ---- quantization ---------------------------------------------------------

using Symbol = std::function<double(double r, double rho)>;

// Properly supported quantization on the lattice r_i = r0 + i dr:
//   K(r_i, r_j) = (2 pi h)^{-1} int e^{i (r_i - r_j) rho / h} a(r_i, rho) drho * kappa(r_j - r_i) * dr,
// with rho over the Brillouin zone |rho| <= pi h / dr, evaluated by FFT row by row.
// Only rows [row_begin, row_end) are formed. The symbol must vanish for |rho| >= 0.9 pi h / dr unless it
// does not depend on rho; quantize(1) is the identity.
Eigen::MatrixXcd quantize(const Symbol& a, double h, double kappa_width, const RadialGrid& grid,
                          std::size_t row_begin = 0,
                          std::size_t row_end = std::numeric_limits<std::size_t>::max());

// Kinetic part of the principal symbol; the lattice variant 2c^2(1 - cos(rho/c)), c = h/dr,
// is the exact symbol of the discrete second difference.
enum class KineticSymbol { Continuum, Lattice };

// Spectral cutoff f together with its support [lo, hi].
struct SpectralCutoff {
  std::function<double(double)> f;
  double lo = 0.0;
  double hi = 0.0;
  static SpectralCutoff dyadic();  // bumps::phi_spec
  // 1 for lambda in [1/2, 2], support [1/50, 30], smooth in log lambda. Its second derivative
  // is ~100x smaller than the dyadic one, which is what sets the size of the O(h) calculus term.
  static SpectralCutoff wide();
};

// a0(r, rho) = f(T(rho) + h^2 mu^2 e^{2 phi(r)}).
Symbol principal_symbol(const WarpProfile& profile, double h, double mu, KineticSymbol kinetic, double c,
                        const SpectralCutoff& cutoff = SpectralCutoff::dyadic());

// Largest singular value by Lanczos on A^* A with full reorthogonalization.
double operator_norm(const Eigen::MatrixXcd& A, int max_steps = 80);

struct SymbolCheck {
  double error;          // || xi [phi_spec(h^2 p_k) - Op(a0)] ||
  double calculus_norm;  // || xi phi_spec(h^2 p_k) ||
  double symbol_sup;     // sup |a0| on the rows used
};

// xi(r) = smooth_step((r - r1) / ramp) * smooth_step((r2 - r) / ramp); r2 may be +inf.
// The eigensystem must cover h^2 lambda in [cutoff.lo, cutoff.hi].
SymbolCheck symbol_vs_calculus(const WarpProfile& profile, double h, double mu, const EigenSystem& es, double r1,
                               double r2, double ramp, double kappa_width,
                               KineticSymbol kinetic = KineticSymbol::Lattice,
                               const SpectralCutoff& cutoff = SpectralCutoff::dyadic());

// ---- Hamiltonian flows ----------------------------------------------------

enum class HamiltonianKind { Schrodinger, HalfWave };

struct FlowSetup {
  WarpProfile profile = WarpProfile::exp_cusp();
  double h = 1.0;
  double mu = 0.0;
  HamiltonianKind kind = HamiltonianKind::Schrodinger;
  double boundary_margin = 0.0;  // the flow fails once x <= r0 + margin
};

struct FlowState {
  double s = 0.0;
  double x = 0.0;
  double xi = 0.0;
  double a = 1.0;  // dx / dx0
  double b = 0.0;  // dx / dxi0
  double c = 0.0;  // dxi / dx0
  double d = 1.0;  // dxi / dxi0
  double S = 0.0;  // action, S' = x' xi - H

  double det() const { return a * d - b * c; }
  std::complex<double> gamma() const { return std::complex<double>(c, d) / std::complex<double>(a, b); }
};

// H = rho^2 + h^2 mu^2 e^{2 phi(r)} or its square root.
double hamiltonian(const FlowSetup& setup, double x, double xi);

// RK4 with `steps` equal steps from s = 0 to s = s_max (s_max may be negative). Returns steps + 1 states.
std::vector<FlowState> flow(const FlowSetup& setup, double x0, double xi0, double s_max, int steps);

// Default resolution: 4096 steps per unit time, at least 64.
int default_flow_steps(double s_max);

// d^2 S / d rho^2 at (t, r, rho) = b_t / d_t at the eta solving xi^t(r, eta) = rho.
// eta is bracketed in [eta_lo, eta_hi] with 64 subdivisions, then refined by safeguarded Newton.
double phase_hessian(const FlowSetup& setup, double r, double rho, double t, double eta_lo, double eta_hi);

struct VanDerCorputResult {
  double lhs;
  double bound;
  bool satisfied;  // lhs <= 3 bound
};

// lhs = |int e^{i S} b|, bound = (||b||_inf + ||b'||_1) / sqrt(lower), on a uniform rho grid.
VanDerCorputResult van_der_corput_check(const std::vector<double>& rho, const std::vector<double>& S,
                                        const std::vector<double>& b, double lower);

// ---- coherent states ------------------------------------------------------

struct CoherentState {
  double h;

  double x0() const;  // -log h
  // (pi h)^{-1/4} chi(r + log h) exp(-(r + log h)^2 / (2h))
  Eigen::VectorXd profile(const Eigen::VectorXd& r) const;
};

// Leading-order propagated packet at traj[index]:
//   (pi h)^{-1/4} (a + i b)^{-1/2} chi(r - x) exp{(i/h)[S + xi (r - x) + Gamma (r - x)^2 / 2]},
// with the square root continued along traj from 1 at s = 0.
Eigen::VectorXcd coherent_evolve_leading(const CoherentState& cs, const std::vector<FlowState>& traj,
                                         std::size_t index, const Eigen::VectorXd& r);

}  // namespace cuspwave
