#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "cuspwave/errors.hpp"
#include "cuspwave/radial.hpp"

using namespace cuspwave;
using doctest::Approx;

TEST_CASE("diagonal entries") {
  auto g = RadialGrid::with_step(0.0, 10.0, 0.1);
  CHECK(g.dr() == Approx(0.1));
  auto op = discretize(WarpProfile::exp_cusp(), 0.0, g);
  for (Eigen::Index i = 0; i < op.diag.size(); ++i) CHECK(op.diag[i] == Approx(200.25));
  CHECK(op.offdiag == Approx(-100.0));
  auto op1 = discretize(WarpProfile::exp_cusp(), 1.0, g);
  // node 9 sits at r = 1
  CHECK(g.node(9) == Approx(1.0));
  CHECK(op1.diag[9] == Approx(200.0 + std::exp(2.0) + 0.25));
}

TEST_CASE("lowest eigenvalue of the flat exponential cusp") {
  auto g = RadialGrid::make(0.0, 40.0, 3999);
  const double lam = lowest_eigenvalue(discretize(WarpProfile::exp_cusp(), 0.0, g));
  // discrete Dirichlet value (2 - 2 cos(pi dr / 40)) / dr^2 differs from (pi/40)^2 by O(dr^2)
  CHECK(lam == Approx(0.25 + std::pow(std::numbers::pi / 40.0, 2)).epsilon(1e-6));
}

TEST_CASE("spectrum on [0, pi] approaches j^2 + w") {
  auto g = RadialGrid::make(0.0, std::numbers::pi, 1999);
  auto es = eigendecompose(discretize(WarpProfile::exp_cusp(), 0.0, g));
  for (int j = 1; j <= 5; ++j) CHECK(es.values[j - 1] == Approx(j * j + 0.25).epsilon(1e-5));
}

TEST_CASE("eigensystem invariants") {
  auto g = RadialGrid::with_step(0.0, 12.0, 0.02);
  auto op = discretize(WarpProfile::cosh_cusp(), 2.0, g);
  auto es = eigendecompose(op);
  CHECK(es.values[0] >= -es.tol_neg);
  const double dr = g.dr();
  Eigen::MatrixXd G = es.vectors.transpose() * es.vectors * dr;
  CHECK((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() <= 1e-10);
  const double amax = op.max_abs_diag();
  for (Eigen::Index j = 0; j < es.size(); j += 37) {
    Eigen::VectorXd v = es.vectors.col(j);
    CHECK((op.apply(v) - es.values[j] * v).norm() * std::sqrt(dr) <= 1e-9 * (std::fabs(es.values[j]) + amax));
    // first component above roundoff
    const double cut = 1e-10 * v.cwiseAbs().maxCoeff();
    Eigen::Index first = 0;
    while (std::fabs(v[first]) <= cut) ++first;
    CHECK(v[first] > 0.0);
  }
  for (Eigen::Index j = 1; j < es.size(); ++j) CHECK(es.values[j] >= es.values[j - 1]);
}

TEST_CASE("windowed eigensystem matches the full one") {
  auto g = RadialGrid::with_step(0.0, 8.0, 0.02);
  auto op = discretize(WarpProfile::exp_cusp(), 1.0, g);
  auto full = eigendecompose(op);
  auto win = eigendecompose(op, SpectralWindow{50.0, 400.0});
  CHECK_FALSE(win.complete);
  CHECK(win.covers(60.0, 390.0));
  CHECK_FALSE(win.covers(10.0, 390.0));
  Eigen::Index first = 0;
  while (full.values[first] <= 50.0) ++first;
  REQUIRE(win.size() > 0);
  for (Eigen::Index j = 0; j < win.size(); ++j) CHECK(win.values[j] == Approx(full.values[first + j]).epsilon(1e-12));
}

TEST_CASE("functional calculus") {
  auto g = RadialGrid::with_step(0.0, 10.0, 0.05);
  auto op = discretize(WarpProfile::exp_cusp(), 1.0, g);
  auto es = eigendecompose(op);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Eigen::VectorXd u(static_cast<Eigen::Index>(g.n));
  for (auto& x : u) x = nd(rng);
  std::function<double(double)> id = [](double l) { return l; };
  std::function<double(double)> one = [](double) { return 1.0; };
  std::function<double(double)> res = [](double l) { return 1.0 / (1.0 + l); };
  const Eigen::VectorXd Au = op.apply(u);
  CHECK((apply_function(es, id, u) - Au).norm() <= 1e-9 * Au.norm());
  CHECK((apply_function(es, one, u) - u).norm() <= 1e-12 * u.norm());
  const Eigen::VectorXd x = solve_shifted(op, 1.0, u);
  CHECK((apply_function(es, res, u) - x).norm() <= 1e-9 * x.norm());
  // (I + A) x = u
  CHECK((x + op.apply(x) - u).norm() <= 1e-9 * u.norm());
}

TEST_CASE("weighted bounds") {
  auto g = RadialGrid::with_step(0.0, 20.0, 0.02);
  auto modes = modes_up_to(AngularManifold::unit_circle(), 4.0);
  CHECK(elliptic_weight_check(WarpProfile::exp_cusp(), g, modes, 1, 0, 0, 4, 9, 1.0) <= 1.0 + 1e-12);
  const double r = elliptic_weight_check(WarpProfile::exp_cusp(), g, modes, 1, 2, 0, 4, 9, 1.0);
  CHECK(std::isfinite(r));
  CHECK(r > 0.0);
}

TEST_CASE("binary cache round trip") {
  auto g = RadialGrid::with_step(1.0, 6.0, 0.05);
  auto op = discretize(WarpProfile::power_cusp(2.0), 3.0, g);
  CHECK_THROWS_AS(write_eigensystem("unused.bin", eigendecompose(op, SpectralWindow{0.0, 200.0})), PreconditionError);
  auto es = eigendecompose(op);
  const auto path = (std::filesystem::temp_directory_path() / "cuspwave-test-cache.bin").string();
  write_eigensystem(path, es);
  auto back = read_eigensystem(path);
  std::filesystem::remove(path);
  CHECK(back.grid == es.grid);
  CHECK(back.values == es.values);
  CHECK(back.vectors == es.vectors);
  CHECK(back.complete == es.complete);
  CHECK(back.window_hi == es.window_hi);
  CHECK_THROWS(read_eigensystem("/nonexistent/cuspwave.bin"));
}
