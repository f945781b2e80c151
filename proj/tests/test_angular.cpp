#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cuspwave/angular.hpp"

using namespace cuspwave;
using doctest::Approx;

TEST_CASE("mode enumeration") {
  const auto circle = AngularManifold::unit_circle();
  auto m = modes_up_to(circle, 2.0);
  REQUIRE(m.size() == 5);
  const double mus[] = {0, 1, 1, 2, 2};
  for (int i = 0; i < 5; ++i) CHECK(m[i].mu == Approx(mus[i]));
  CHECK(m[0].parity == Parity::Const);
  CHECK(m[1].parity == Parity::Cos);
  CHECK(m[2].parity == Parity::Sin);
  CHECK(modes_up_to(circle, 0.0).size() == 1);

  AngularManifold two{{2 * std::numbers::pi, 2 * std::numbers::pi}};
  auto z = modes_up_to(two, 0.5);
  REQUIRE(z.size() == 2);
  CHECK(two.k0() == 2);
  for (const auto& mode : z) CHECK(mode.parity == Parity::Const);

  // mixed circumferences interleave by mu
  AngularManifold mixed{{2 * std::numbers::pi, std::numbers::pi}};
  auto mm = modes_up_to(mixed, 3.0);
  for (std::size_t i = 1; i < mm.size(); ++i) CHECK(mm[i - 1].mu <= mm[i].mu);
  for (std::size_t i = 0; i < mm.size(); ++i) CHECK((mm[i].mu == 0.0) == (i < 2));
}

TEST_CASE("projections") {
  auto m = modes_up_to(AngularManifold::unit_circle(), 1.0);
  CHECK(project(m, Projection::Pi) == std::vector<bool>{true, false, false});
  auto pc = project(m, Projection::PiC);
  CHECK(pc == std::vector<bool>{false, true, true});
  CHECK(project(m, pc, Projection::PiC) == pc);
  CHECK(project(m, pc, Projection::Pi) == std::vector<bool>{false, false, false});
}

TEST_CASE("synthesize and analyze") {
  const auto circle = AngularManifold::unit_circle();
  auto m = modes_up_to(circle, 4.0);
  const std::size_t N = default_theta_points(m);
  std::vector<std::complex<double>> c(m.size());
  c[0] = 1.0;
  auto v = synthesize(m, circle, c, N);
  for (auto x : v[0]) CHECK(std::abs(x - 1.0 / std::sqrt(2 * std::numbers::pi)) < 1e-14);
  c[0] = 0.0;
  c[1] = 1.0;
  v = synthesize(m, circle, c, N);
  for (std::size_t j = 0; j < N; ++j) {
    const double th = 2 * std::numbers::pi * j / N;
    CHECK(std::abs(v[0][j] - std::cos(th) / std::sqrt(std::numbers::pi)) < 1e-14);
  }

  AngularValues cst{std::vector<std::complex<double>>(N, 2.0)};
  auto a = analyze(m, circle, cst);
  CHECK(std::abs(a[0] - 2.0 * std::sqrt(2 * std::numbers::pi)) < 1e-12);
  for (std::size_t k = 1; k < a.size(); ++k) CHECK(std::abs(a[k]) < 1e-12);

  AngularValues cosv(1, std::vector<std::complex<double>>(N));
  for (std::size_t j = 0; j < N; ++j) cosv[0][j] = std::cos(2 * std::numbers::pi * j / N);
  a = analyze(m, circle, cosv);
  CHECK(std::abs(a[1] - std::sqrt(std::numbers::pi)) < 1e-12);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  AngularManifold two{{2 * std::numbers::pi, 3.0}};
  auto m2 = modes_up_to(two, 6.0);
  std::vector<std::complex<double>> r(m2.size());
  for (auto& z : r) z = {g(rng), g(rng)};
  const std::size_t N2 = default_theta_points(m2);
  auto vals = synthesize(m2, two, r, N2);
  auto back = analyze(m2, two, vals);
  double sq = 0.0, trap = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    CHECK(std::abs(back[k] - r[k]) < 1e-12);
    sq += std::norm(r[k]);
  }
  for (std::size_t comp = 0; comp < 2; ++comp) {
    for (auto x : vals[comp]) trap += std::norm(x) * two.circumferences[comp] / N2;
  }
  CHECK(sq == Approx(trap).epsilon(1e-12));
}

TEST_CASE("basis values are normalized") {
  const auto circle = AngularManifold::unit_circle();
  auto m = make_mode(circle, 0, 3, Parity::Sin);
  CHECK(m.mu == Approx(3.0));
  double s = 0.0;
  const int N = 64;
  for (int j = 0; j < N; ++j) s += std::pow(basis_value(m, circle, 2 * std::numbers::pi * j / N), 2) * 2 * std::numbers::pi / N;
  CHECK(s == Approx(1.0));
}
