#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cuspwave/bumps.hpp"
#include "cuspwave/errors.hpp"
#include "cuspwave/semiclassics.hpp"

using namespace cuspwave;
using doctest::Approx;

TEST_CASE("quantization of 1 is the identity") {
  auto grid = RadialGrid::with_step(0.0, 6.0, 0.01);
  Symbol one = [](double, double) { return 1.0; };
  auto K = quantize(one, 0.1, 0.5, grid, 100, 160);
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    for (Eigen::Index j = 0; j < K.cols(); ++j) CHECK(std::abs(K(i, j) - (j == 100 + i ? 1.0 : 0.0)) < 1e-13);
  }
  // a multiplication symbol stays a multiplication
  Symbol v = [](double r, double) { return std::exp(-r); };
  auto M = quantize(v, 0.1, 0.5, grid, 200, 202);
  CHECK(std::abs(M(1, 201) - std::exp(-grid.node(201))) < 1e-13);
  CHECK(std::abs(M(1, 202)) < 1e-13);
  // a rho-dependent symbol reaching the zone edge is rejected
  Symbol edge = [](double, double rho) { return 1.0 + 0.1 * std::cos(rho); };
  CHECK_THROWS_AS(quantize(edge, 0.1, 0.5, grid, 100, 110), PreconditionError);
  // kernel cutoff must not reach r0
  CHECK_THROWS_AS(quantize(one, 0.1, 0.5, grid, 10, 20), PreconditionError);
}

TEST_CASE("quantization of a symbol of rho only is a convolution") {
  auto grid = RadialGrid::with_step(0.0, 8.0, 1.0 / 96);
  const double h = 1.0 / 32;
  Symbol a = principal_symbol(WarpProfile::exp_cusp(), h, 0.0, KineticSymbol::Continuum, h / grid.dr());
  auto K = quantize(a, h, 0.8, grid, 100, 400);
  for (Eigen::Index i = 1; i < K.rows(); i += 17) {
    for (int d = -50; d <= 50; d += 5) CHECK(std::abs(K(i, 100 + i + d) - K(0, 100 + d)) < 1e-14);
  }
  // bounded by about the symbol sup
  CHECK(operator_norm(K) <= 1.2);
}

TEST_CASE("quantized principal symbol is bounded") {
  for (double h : {0.125, 0.0625, 0.03125}) {
    auto grid = RadialGrid::with_step(0.0, 5.0, h / 3);
    auto a = principal_symbol(WarpProfile::exp_cusp(), h, 0.125 / h, KineticSymbol::Lattice, h / grid.dr());
    std::size_t rb = 0;
    while (grid.node(rb) < 1.0) ++rb;
    auto K = quantize(a, h, 0.9, grid, rb, grid.n);
    CHECK(operator_norm(K) <= 1.2);
  }
}

TEST_CASE("operator norm matches the dense singular value") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(40, 30);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  CHECK(operator_norm(A) == Approx(svd.singularValues()[0]).epsilon(1e-10));
}

TEST_CASE("symbol against functional calculus") {
  const auto prof = WarpProfile::exp_cusp();
  // cutoff vanishing on the numerical range: both sides vanish
  {
    const double h = 0.125;
    auto grid = RadialGrid::with_step(0.0, 6.0, h / 3);
    auto es = eigendecompose(discretize(prof, 1.0, grid));
    SpectralCutoff off{[](double l) { return l > 1e6 ? 1.0 : 0.0; }, 1e6, 2e6};
    auto chk = symbol_vs_calculus(prof, h, 1.0, es, 2.0, 3.5, 0.5, 1.9, KineticSymbol::Lattice, off);
    CHECK(chk.error <= 1e-10);
  }
  // forbidden region: h mu e^{phi} beyond the support on supp xi
  {
    const double h = 0.0625;
    const double mu = 16.0;  // h mu e^{2} = 7.4 > sqrt(2)
    auto grid = RadialGrid::with_step(0.0, 5.0, h / 3);
    auto es = eigendecompose(discretize(prof, mu, grid));
    auto chk = symbol_vs_calculus(prof, h, mu, es, 2.0, 3.5, 0.5, 1.9);
    CHECK(chk.symbol_sup == 0.0);
    CHECK(chk.calculus_norm <= h);
  }
  // first-order accuracy with the wide cutoff
  {
    std::vector<double> err;
    for (double h : {1.0 / 32, 1.0 / 64}) {
      auto grid = RadialGrid::with_step(0.0, 6.0, h / 3);
      auto es = eigendecompose(discretize(prof, 0.125 / h, grid));
      err.push_back(symbol_vs_calculus(prof, h, 0.125 / h, es, 2.0, 3.5, 0.5, 1.9, KineticSymbol::Lattice,
                                       SpectralCutoff::wide())
                        .error);
    }
    const double order = std::log2(err[0] / err[1]);
    CHECK(order > 0.6);
    CHECK(order < 1.4);
  }
}

TEST_CASE("free flow") {
  FlowSetup st;
  st.mu = 0.0;
  auto traj = flow(st, 3.0, 0.7, 1.0, 256);
  REQUIRE(traj.size() == 257);
  for (const auto& s : traj) {
    CHECK(s.x == Approx(3.0 + 2 * s.s * 0.7).epsilon(1e-12));
    CHECK(s.xi == Approx(0.7));
    CHECK(s.a == Approx(1.0));
    CHECK(s.b == Approx(2 * s.s).epsilon(1e-12));
    CHECK(s.c == Approx(0.0));
    CHECK(s.d == Approx(1.0));
    CHECK(s.S == Approx(s.s * 0.49).epsilon(1e-12));
    const auto g = s.gamma();
    CHECK(std::abs(g - std::complex<double>(0, 1) / std::complex<double>(1, 2 * s.s)) < 1e-12);
    CHECK(g.imag() >= 0.2 - 1e-12);
  }
}

TEST_CASE("flow invariants on the exponential cusp") {
  FlowSetup st;
  st.h = 1.0 / 64;
  st.mu = 1.0;
  for (auto kind : {HamiltonianKind::Schrodinger, HamiltonianKind::HalfWave}) {
    st.kind = kind;
    const double x0 = std::log(0.5 * 64), xi0 = -0.8;
    const double H0 = hamiltonian(st, x0, xi0);
    auto traj = flow(st, x0, xi0, 1.0, default_flow_steps(1.0));
    for (const auto& s : traj) {
      CHECK(hamiltonian(st, s.x, s.xi) == Approx(H0).epsilon(1e-10));
      CHECK(std::fabs(s.det() - 1.0) < 1e-9);
    }
  }
  st.kind = HamiltonianKind::Schrodinger;
  st.boundary_margin = 0.5;
  CHECK_THROWS_AS(flow(st, 1.0, -2.0, 1.0, 512), NumericalError);
  st.kind = HamiltonianKind::HalfWave;
  st.mu = 0.0;
  CHECK_THROWS(flow(st, 3.0, 0.0, 1.0, 64));
}

TEST_CASE("phase hessian") {
  FlowSetup st;
  st.mu = 0.0;
  CHECK(phase_hessian(st, 5.0, 0.8, 0.3, 0.5, 1.5) == Approx(0.6).epsilon(1e-9));
  st.h = 1.0 / 64;
  st.mu = 1.0;
  const double L = std::log(0.5 * 64);
  for (double rho : {-0.9, -0.5, 0.6}) CHECK(phase_hessian(st, L + 0.5, rho, 0.05, -2.0, 2.0) / 0.05 >= 0.9);
}

TEST_CASE("van der corput") {
  std::vector<double> rho, b0, b;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -2.0 + 4.0 * i / 4000;
    rho.push_back(x);
    b0.push_back(0.0);
    b.push_back(bumps::plateau(x, -1.8, -1.0, 1.0, 1.8));
  }
  std::vector<double> prev_lhs;
  for (double lam : {50.0, 200.0, 800.0}) {
    std::vector<double> S;
    for (double x : rho) S.push_back(lam * x * x);
    CHECK(van_der_corput_check(rho, S, b0, 2 * lam).lhs == 0.0);
    auto r = van_der_corput_check(rho, S, b, 2 * lam);
    CHECK(r.satisfied);
    // Fresnel: |int e^{i lam x^2}| ~ sqrt(pi / lam)
    CHECK(r.lhs * std::sqrt(lam) == Approx(std::sqrt(std::numbers::pi)).epsilon(0.1));
  }
  std::vector<double> lin;
  for (double x : rho) lin.push_back(3.0 * x);
  CHECK_THROWS_AS(van_der_corput_check(rho, lin, b, 1.0), PreconditionError);
}

TEST_CASE("coherent states") {
  const double h = 1.0 / 64;
  CoherentState cs{h};
  CHECK(cs.x0() == Approx(std::log(64.0)));
  auto grid = RadialGrid::with_step(0.0, 10.0, h / 8);
  const Eigen::VectorXd r = grid.nodes();
  const Eigen::VectorXd u0 = cs.profile(r);
  CHECK(u0.norm() * std::sqrt(grid.dr()) == Approx(1.0).epsilon(1e-10));
  FlowSetup st;
  st.h = h;
  st.mu = 1.0;
  auto traj = flow(st, cs.x0(), 0.0, 0.5, default_flow_steps(0.5));
  CHECK((coherent_evolve_leading(cs, traj, 0, r) - u0.cast<std::complex<double>>()).cwiseAbs().maxCoeff() < 1e-13);
  const double n = coherent_evolve_leading(cs, traj, traj.size() - 1, r).norm() * std::sqrt(grid.dr());
  CHECK(std::fabs(n - 1.0) < 3 * std::sqrt(h));
}
