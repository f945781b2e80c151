#include <doctest.h>

#include <cmath>
#include <random>

#include "cuspwave/propagate.hpp"

using namespace cuspwave;
using doctest::Approx;

namespace {

struct Setup {
  RadialGrid grid = RadialGrid::with_step(0.0, 12.0, 0.02);
  std::vector<Mode> modes = modes_up_to(AngularManifold::unit_circle(), 2.0);
  std::vector<EigenSystem> es;
  CuspState u;
  Setup() {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    u = CuspState::zero(modes, grid);
    for (const auto& m : modes) {
      es.push_back(eigendecompose(discretize(WarpProfile::exp_cusp(), m.mu, grid)));
      Eigen::VectorXcd c(es.back().size());
      for (Eigen::Index j = 0; j < c.size(); ++j) c[j] = std::complex<double>(g(rng), g(rng)) * std::exp(-es.back().values[j] / 100.0);
      u.u[m.k] = es.back().synthesize(c);
    }
  }
};

double sup_diff(const CuspState& a, const CuspState& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.u.size(); ++k) d = std::max(d, (a.u[k] - b.u[k]).cwiseAbs().maxCoeff());
  return d;
}

}  // namespace

TEST_CASE("multipliers") {
  CHECK(std::abs(multiplier(EvolutionKind::Schrodinger, 0.5, 2.0) - std::polar(1.0, -1.0)) < 1e-15);
  CHECK(std::abs(multiplier(EvolutionKind::HalfWave, 0.5, 4.0) - std::polar(1.0, 1.0)) < 1e-15);
  CHECK(std::abs(multiplier(EvolutionKind::CosWave, 0.5, 4.0) - std::cos(1.0)) < 1e-15);
  CHECK(std::abs(multiplier(EvolutionKind::SinWaveOverSqrt, 0.5, 4.0) - std::sin(1.0) / 2.0) < 1e-15);
  CHECK(std::abs(multiplier(EvolutionKind::SinWaveOverSqrt, 0.5, 0.0) - 0.5) < 1e-15);
}

TEST_CASE("evolution identities") {
  Setup s;
  for (auto kind : {EvolutionKind::Schrodinger, EvolutionKind::CosWave, EvolutionKind::HalfWave}) {
    CHECK(sup_diff(evolve(s.u, s.es, 0.0, kind), s.u) < 1e-12);
  }
  CHECK(evolve(s.u, s.es, 0.7, EvolutionKind::Schrodinger).norm() == Approx(s.u.norm()).epsilon(1e-12));
  CHECK(sup_diff(evolve(s.u, s.es, 0.9, EvolutionKind::CosWave), evolve(s.u, s.es, -0.9, EvolutionKind::CosWave)) < 1e-12);
  // back and forth
  auto f = evolve(evolve(s.u, s.es, 1.3, EvolutionKind::HalfWave), s.es, -1.3, EvolutionKind::HalfWave);
  CHECK(sup_diff(f, s.u) < 1e-12);
}

TEST_CASE("closed-form flat cusp solution") {
  Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(6001, 0.0, 60.0);
  const double dr = r[1] - r[0];
  auto u0 = exact_flat_cusp(8.0, 0.0, r);
  for (Eigen::Index i = 0; i < r.size(); i += 97) {
    const double ref = std::exp(-std::pow(r[i] - 8.0, 2) / 2) - std::exp(-std::pow(r[i] + 8.0, 2) / 2);
    CHECK(std::abs(u0[i] - ref) < 1e-15);
  }
  for (double t : {0.1, 0.5}) CHECK(std::abs(exact_flat_cusp(8.0, t, r)[0]) < 1e-15);
  // trapezoid is spectrally accurate here: both ends are negligible
  auto l2 = [&](const Eigen::VectorXcd& v) { return std::sqrt(v.squaredNorm() * dr); };
  CHECK(l2(exact_flat_cusp(8.0, 0.5, r)) == Approx(l2(u0)).epsilon(1e-12));
}

TEST_CASE("spectral propagation matches the closed form") {
  auto grid = RadialGrid::with_step(0.0, 40.0, 0.01);
  const Mode m0 = make_mode(AngularManifold::unit_circle(), 0, 0, Parity::Const);
  auto es = eigendecompose(discretize(WarpProfile::exp_cusp(), 0.0, grid), SpectralWindow{0.0, 400.0});
  CuspState s = CuspState::zero({m0}, grid);
  const Eigen::VectorXd r = grid.nodes();
  s.u[0] = exact_flat_cusp(8.0, 0.0, r);
  for (double t : {0.25, 1.0}) {
    auto e = evolve(s, std::vector<EigenSystem>{es}, t, EvolutionKind::Schrodinger);
    CHECK((e.u[0] - exact_flat_cusp(8.0, -t, r)).cwiseAbs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("restriction") {
  Setup s;
  CHECK(sup_diff(restrict(s.u, s.grid.r0), s.u) == 0.0);
  auto a = restrict(s.u, 3.0);
  CHECK(sup_diff(restrict(a, 3.0), a) == 0.0);
  const double total = std::pow(s.u.norm(), 2);
  CHECK(std::pow(a.norm(), 2) + std::pow((s.u - a).norm(), 2) == Approx(total).epsilon(1e-12));
}

TEST_CASE("state arithmetic and norm") {
  Setup s;
  auto twice = s.u + s.u;
  CHECK(twice.norm() == Approx(2.0 * s.u.norm()));
  auto z = s.u - s.u;
  CHECK(z.norm() == 0.0);
  auto c = std::complex<double>(0.0, 3.0) * s.u;
  CHECK(c.norm() == Approx(3.0 * s.u.norm()));
  double direct = 0.0;
  for (const auto& v : s.u.u) direct += v.squaredNorm() * s.grid.dr();
  CHECK(s.u.norm() == Approx(std::sqrt(direct)));
}
