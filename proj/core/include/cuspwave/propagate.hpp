#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cuspwave/angular.hpp"
#include "cuspwave/radial.hpp"

namespace cuspwave {

// Per-mode radial vectors of u = e^{-phi/2} psi on a shared grid.
struct CuspState {
  std::vector<Mode> modes;
  RadialGrid grid;
  std::vector<Eigen::VectorXcd> u;

  static CuspState zero(std::vector<Mode> modes, const RadialGrid& grid);
  double norm() const;  // equals the L^2_{G0} norm of psi
  CuspState& operator+=(const CuspState& other);
  CuspState& operator*=(std::complex<double> c);
};

CuspState operator+(CuspState a, const CuspState& b);
CuspState operator-(CuspState a, const CuspState& b);
CuspState operator*(std::complex<double> c, CuspState a);

enum class EvolutionKind { Schrodinger, CosWave, SinWaveOverSqrt, HalfWave };

// Spectral multiplier of the flow at time t on eigenvalue lambda >= 0:
//   Schrodinger e^{-i t lambda}, CosWave cos(t sqrt lambda), HalfWave e^{i t sqrt lambda},
//   SinWaveOverSqrt sin(t sqrt lambda)/sqrt lambda (t at lambda = 0).
std::complex<double> multiplier(EvolutionKind kind, double t, double lambda);

// Applies the multiplier mode by mode. eigensystems[k] belongs to state.modes[k].
// A windowed eigensystem projects the mode onto its window first.
CuspState evolve(const CuspState& state, const std::vector<const EigenSystem*>& eigensystems, double t,
                 EvolutionKind kind);
CuspState evolve(const CuspState& state, const std::vector<EigenSystem>& eigensystems, double t, EvolutionKind kind);

// e^{it/4} (1 - 2it)^{-1/2} [exp(-(r-n)^2 / (2(1-2it))) - exp(-(r+n)^2 / (2(1-2it)))].
// This is e^{+i t p_0} u_n for the flat exponential cusp, so evolve(Schrodinger, t) matches it at -t.
Eigen::VectorXcd exact_flat_cusp(double n_center, double t, const Eigen::VectorXd& r);

// Zeroes nodes with r < r1.
CuspState restrict(const CuspState& state, double r1);

// Rows: mode_k, i, r_i, re, im.
void write_state_csv(const std::string& path, const CuspState& state);

}  // namespace cuspwave
