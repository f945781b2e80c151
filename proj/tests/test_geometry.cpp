#include <doctest.h>

#include <cmath>

#include "cuspwave/errors.hpp"
#include "cuspwave/geometry.hpp"

using namespace cuspwave;
using doctest::Approx;

TEST_CASE("warp values at reference points") {
  auto e = eval_warp(WarpProfile::exp_cusp(), 3.0);
  CHECK(e.phi == Approx(3.0));
  CHECK(e.dphi == Approx(1.0));
  CHECK(e.d2phi == Approx(0.0));
  CHECK(e.w == Approx(0.25));

  auto c = eval_warp(WarpProfile::cosh_cusp(), 0.0);
  CHECK(c.phi == Approx(0.0));
  CHECK(c.dphi == Approx(0.0));
  CHECK(c.d2phi == Approx(1.0));
  CHECK(c.w == Approx(-0.5));

  auto p = eval_warp(WarpProfile::power_cusp(2.0, 1.0), 1.0);
  CHECK(p.phi == Approx(0.0));
  CHECK(p.dphi == Approx(2.0));
  CHECK(p.d2phi == Approx(-2.0));
  CHECK(p.w == Approx(2.0));
}

TEST_CASE("derivatives agree with finite differences") {
  for (auto prof : {WarpProfile::exp_cusp(), WarpProfile::cosh_cusp(), WarpProfile::power_cusp(2.5, 1.0)}) {
    for (double r : {1.3, 2.7, 6.0}) {
      const double eps = 1e-4;
      for (int j = 1; j <= 4; ++j) {
        const double fd = (prof.derivative(j - 1, r + eps) - prof.derivative(j - 1, r - eps)) / (2 * eps);
        CHECK(prof.derivative(j, r) == Approx(fd).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("domain and construction errors") {
  CHECK_THROWS_AS(WarpProfile::exp_cusp(1.0).eval(0.5), DomainError);
  CHECK_THROWS_AS(WarpProfile::power_cusp(1.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(WarpProfile::power_cusp(2.0, 0.1), PreconditionError);
  CHECK(warp_kind_from_string("cosh") == WarpKind::Cosh);
  CHECK(to_string(WarpKind::Power) == "power");
  CHECK_THROWS(warp_kind_from_string("sinh"));
}

TEST_CASE("area tail") {
  CHECK(area_tail(WarpProfile::exp_cusp(), 0.0) == Approx(0.0));
  CHECK(area_tail(WarpProfile::exp_cusp(), 60.0) == Approx(1.0).epsilon(1e-10));
  CHECK(area_tail(WarpProfile::power_cusp(2.0, 1.0), 1e4) == Approx(1.0 - 1e-4).epsilon(1e-8));
  // cosh: int_0^inf sech r dr = pi / 2
  CHECK(area_tail(WarpProfile::cosh_cusp(), 60.0) == Approx(M_PI / 2).epsilon(1e-10));
  for (auto prof : {WarpProfile::exp_cusp(), WarpProfile::cosh_cusp()}) {
    const double a = area_tail(prof, 60.0), b = area_tail(prof, 61.0);
    CHECK((b - a) / a < 1e-8);
  }
}

TEST_CASE("shell sums") {
  CHECK(shell_weight_sum(WarpProfile::exp_cusp(), 1, 1) == Approx(std::exp(-1.0)));
  CHECK(shell_weight_sum(WarpProfile::exp_cusp(), 1, 200) == Approx(std::exp(-1.0) / (1 - std::exp(-1.0))));
  double brute = 0.0;
  for (int L = 1; L <= 40; ++L) brute += 1.0 / std::cosh(static_cast<double>(L));
  CHECK(shell_weight_sum(WarpProfile::cosh_cusp(), 1, 40) == Approx(brute).epsilon(1e-14));
}
