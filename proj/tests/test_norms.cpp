#include <doctest.h>

#include <cmath>
#include <random>

#include "cuspwave/bumps.hpp"
#include "cuspwave/errors.hpp"
#include "cuspwave/norms.hpp"

using namespace cuspwave;
using doctest::Approx;

TEST_CASE("simpson weights integrate cubics exactly") {
  for (std::size_t pts : {5u, 6u, 7u, 10u, 101u}) {
    const double h = 0.3;
    auto w = simpson_weights(pts, h);
    double s = 0.0;
    for (std::size_t i = 0; i < pts; ++i) {
      const double x = h * i;
      s += w[i] * (x * x * x - 2 * x + 1);
    }
    const double L = h * (pts - 1);
    CHECK(s == Approx(L * L * L * L / 4 - L * L + L).epsilon(1e-12));
  }
}

TEST_CASE("q = 2 on one zero mode is the L2 norm") {
  const auto prof = WarpProfile::exp_cusp();
  const auto circle = AngularManifold::unit_circle();
  auto grid = RadialGrid::with_step(0.0, 20.0, 0.01);
  auto modes = modes_up_to(circle, 0.0);
  CuspState s = CuspState::zero(modes, grid);
  for (std::size_t i = 0; i < grid.n; ++i) s.u[0][static_cast<Eigen::Index>(i)] = bumps::chi(grid.node(i) - 8.0);
  s *= 1.0 / s.norm();
  CHECK(lq_spatial(s, 2.0, prof, circle) == Approx(1.0).epsilon(1e-10));
  CHECK(lq_spatial(std::complex<double>(0, -2.5) * s, 4.0, prof, circle) ==
        Approx(2.5 * lq_spatial(s, 4.0, prof, circle)).epsilon(1e-13));
}

TEST_CASE("translated bumps grow like e^{(1/2 - 1/q) n}") {
  const auto prof = WarpProfile::exp_cusp();
  const auto circle = AngularManifold::unit_circle();
  auto grid = RadialGrid::with_step(0.0, 30.0, 0.01);
  auto modes = modes_up_to(circle, 0.0);
  std::vector<double> vals;
  for (double n : {6.0, 10.0, 14.0}) {
    CuspState s = CuspState::zero(modes, grid);
    for (std::size_t i = 0; i < grid.n; ++i) s.u[0][static_cast<Eigen::Index>(i)] = bumps::chi(grid.node(i) - n);
    s *= 1.0 / s.norm();
    vals.push_back(lq_spatial(s, 4.0, prof, circle));
  }
  CHECK(std::log(vals[1] / vals[0]) / 4.0 == Approx(0.25).epsilon(1e-6));
  CHECK(std::log(vals[2] / vals[1]) / 4.0 == Approx(0.25).epsilon(1e-6));
}

TEST_CASE("L^q evaluator agrees with direct summation") {
  const auto prof = WarpProfile::cosh_cusp();
  AngularManifold circle = AngularManifold::unit_circle();
  auto grid = RadialGrid::with_step(0.0, 5.0, 0.05);
  auto modes = modes_up_to(circle, 2.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  CuspState s = CuspState::zero(modes, grid);
  for (auto& v : s.u) {
    for (auto& x : v) x = {g(rng), g(rng)};
  }
  const std::size_t N = 32;
  LqEvaluator ev(prof, circle, modes, grid, 3.0, N);
  // direct: trapezoid in theta, Simpson in r with zero end values
  const double dr = grid.dr();
  auto w = simpson_weights(grid.n + 2, dr);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double r = grid.node(i);
    for (std::size_t j = 0; j < N; ++j) {
      const double th = 2 * M_PI * j / N;
      std::complex<double> u = 0.0;
      for (const auto& m : modes) u += s.u[m.k][static_cast<Eigen::Index>(i)] * basis_value(m, circle, th);
      acc += w[i + 1] * (2 * M_PI / N) * std::pow(std::abs(u), 3.0) * std::exp(0.5 * prof.phi(r));
    }
  }
  CHECK(ev(s) == Approx(std::cbrt(acc)).epsilon(1e-12));
}

TEST_CASE("sobolev norms") {
  auto grid = RadialGrid::with_step(0.0, 10.0, 0.05);
  auto modes = modes_up_to(AngularManifold::unit_circle(), 1.0);
  std::vector<EigenSystem> es;
  for (const auto& m : modes) es.push_back(eigendecompose(discretize(WarpProfile::exp_cusp(), m.mu, grid)));
  CuspState s = CuspState::zero(modes, grid);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    for (std::size_t i = 0; i < grid.n; ++i) s.u[k][static_cast<Eigen::Index>(i)] = bumps::chi(grid.node(i) - 5.0 - k);
  }
  CHECK(sobolev(s, 0.0, es) == Approx(s.norm()).epsilon(1e-12));
  double prev = 0.0;
  for (double sig : {0.0, 0.5, 1.0, 2.0}) {
    const double v = sobolev(s, sig, es);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("mixed norms") {
  std::vector<double> c(33, 2.0);
  CHECK(mixed_norm(c, 4.0, 0.5) == Approx(2.0 * std::pow(0.5, 0.25)).epsilon(1e-13));
  CHECK(mixed_norm(c, kInfinity, 0.5) == 2.0);
  // ||f||_{L^p([0,h])} = h^{1/p} ||f(h .)||_{L^p([0,1])}
  const double h = 1.0 / 16, p = 6.0;
  std::vector<double> a(65), b(65);
  for (int j = 0; j <= 64; ++j) {
    const double s = j / 64.0;
    a[j] = 1.0 + std::sin(3 * s * h * 16);
    b[j] = a[j];
  }
  CHECK(mixed_norm(a, p, h) == Approx(std::pow(h, 1 / p) * mixed_norm(b, p, 1.0)).epsilon(1e-13));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(17), y(17), xy(17);
    for (int j = 0; j < 17; ++j) {
      x[j] = u(rng);
      y[j] = u(rng);
      xy[j] = x[j] + y[j];
    }
    CHECK(mixed_norm(xy, 4.0, 1.0) <= mixed_norm(x, 4.0, 1.0) + mixed_norm(y, 4.0, 1.0) + 1e-14);
  }
}

TEST_CASE("loss exponents") {
  CHECK(exponents({4, 4, PairFamily::SchrodingerSharp}).sigma_s == Approx(1.0 / 8));
  CHECK(exponents({6, 3, PairFamily::SchrodingerSharp}).sigma_s == Approx(1.0 / 12));
  CHECK(exponents({8, 4, PairFamily::WaveSharp}).sigma_w == Approx(3.0 / 8));
  CHECK_THROWS_AS(exponents({4, 3, PairFamily::SchrodingerSharp}), PreconditionError);
  CHECK_THROWS_AS(exponents({4, 4, PairFamily::WaveSharp}), PreconditionError);
}
