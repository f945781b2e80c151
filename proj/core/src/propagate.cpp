#include "cuspwave/propagate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "cuspwave/errors.hpp"

namespace cuspwave {

CuspState CuspState::zero(std::vector<Mode> modes, const RadialGrid& grid) {
  CuspState s;
  s.grid = grid;
  s.u.assign(modes.size(), Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.n)));
  s.modes = std::move(modes);
  return s;
}

double CuspState::norm() const {
  double acc = 0.0;
  for (const auto& v : u) acc += v.squaredNorm();
  return std::sqrt(acc * grid.dr());
}

CuspState& CuspState::operator+=(const CuspState& other) {
  if (other.u.size() != u.size() || !(other.grid == grid)) throw PreconditionError("state shapes differ");
  for (std::size_t k = 0; k < u.size(); ++k) u[k] += other.u[k];
  return *this;
}

CuspState& CuspState::operator*=(std::complex<double> c) {
  for (auto& v : u) v *= c;
  return *this;
}

CuspState operator+(CuspState a, const CuspState& b) { return a += b; }

CuspState operator-(CuspState a, const CuspState& b) {
  CuspState nb = b;
  nb *= -1.0;
  return a += nb;
}

CuspState operator*(std::complex<double> c, CuspState a) { return a *= c; }

std::complex<double> multiplier(EvolutionKind kind, double t, double lambda) {
  if (lambda < 0.0) throw NumericalError("multiplier: negative eigenvalue after clamping");
  const double s = std::sqrt(lambda);
  switch (kind) {
    case EvolutionKind::Schrodinger: return std::polar(1.0, -t * lambda);
    case EvolutionKind::CosWave: return std::cos(t * s);
    case EvolutionKind::HalfWave: return std::polar(1.0, t * s);
    case EvolutionKind::SinWaveOverSqrt:
      // sin(ts)/s = t sinc(ts); the series avoids cancellation near 0
      if (t * s < 1e-4) return t * (1.0 - (t * s) * (t * s) / 6.0);
      return std::sin(t * s) / s;
  }
  return 0.0;
}

CuspState evolve(const CuspState& state, const std::vector<const EigenSystem*>& eigensystems, double t,
                 EvolutionKind kind) {
  if (eigensystems.size() != state.modes.size()) throw PreconditionError("evolve: one eigensystem per mode required");
  CuspState out = state;
  for (std::size_t k = 0; k < state.modes.size(); ++k) {
    const EigenSystem& es = *eigensystems[k];
    if (!(es.grid == state.grid) || es.mu != state.modes[k].mu) {
      throw PreconditionError("evolve: eigensystem does not match mode/grid");
    }
    Eigen::VectorXcd c = es.coefficients(state.u[k]);
    for (Eigen::Index j = 0; j < c.size(); ++j) c[j] *= multiplier(kind, t, es.values[j]);
    out.u[k] = es.synthesize(c);
  }
  return out;
}

CuspState evolve(const CuspState& state, const std::vector<EigenSystem>& eigensystems, double t, EvolutionKind kind) {
  std::vector<const EigenSystem*> ptrs;
  ptrs.reserve(eigensystems.size());
  for (const auto& es : eigensystems) ptrs.push_back(&es);
  return evolve(state, ptrs, t, kind);
}

Eigen::VectorXcd exact_flat_cusp(double n_center, double t, const Eigen::VectorXd& r) {
  using C = std::complex<double>;
  const C one_m = C(1.0, -2.0 * t);
  const C pref = std::polar(1.0, t / 4.0) / std::sqrt(one_m);
  Eigen::VectorXcd out(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double a = r[i] - n_center;
    const double b = r[i] + n_center;
    out[i] = pref * (std::exp(-a * a / (2.0 * one_m)) - std::exp(-b * b / (2.0 * one_m)));
  }
  return out;
}

CuspState restrict(const CuspState& state, double r1) {
  if (!(r1 >= state.grid.r0)) throw PreconditionError("restrict: r1 below r0");
  CuspState out = state;
  for (std::size_t i = 0; i < state.grid.n; ++i) {
    if (state.grid.node(i) < r1) {
      for (auto& v : out.u) v[static_cast<Eigen::Index>(i)] = 0.0;
    }
  }
  return out;
}

void write_state_csv(const std::string& path, const CuspState& state) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "mode_k,i,r_i,re,im\n";
  char buf[160];
  for (std::size_t k = 0; k < state.modes.size(); ++k) {
    for (std::size_t i = 0; i < state.grid.n; ++i) {
      const auto z = state.u[k][static_cast<Eigen::Index>(i)];
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g,%.17g\n", state.modes[k].k, i + 1, state.grid.node(i),
                    z.real(), z.imag());
      out << buf;
    }
  }
}

}  // namespace cuspwave
