#include "cuspwave/semiclassics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "cuspwave/bumps.hpp"
#include "cuspwave/errors.hpp"

namespace cuspwave {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffers {
  explicit FftwBuffers(int n) : n(n) {
    in = fftw_alloc_complex(static_cast<std::size_t>(n));
    out = fftw_alloc_complex(static_cast<std::size_t>(n));
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftwBuffers() {
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
  }
  FftwBuffers(const FftwBuffers&) = delete;
  FftwBuffers& operator=(const FftwBuffers&) = delete;

  int n;
  fftw_complex* in;
  fftw_complex* out;
  fftw_plan plan;
};

}  // namespace

Eigen::MatrixXcd quantize(const Symbol& a, double h, double kappa_width, const RadialGrid& grid,
                          std::size_t row_begin, std::size_t row_end) {
  if (!(kappa_width > 0.0)) throw PreconditionError("quantize: kappa_width must be positive");
  if (!(h > 0.0)) throw PreconditionError("quantize: h must be positive");
  row_end = std::min(row_end, grid.n);
  if (row_begin >= row_end) throw PreconditionError("quantize: empty row range");
  const double dr = grid.dr();
  if (grid.node(row_begin) - kappa_width <= grid.r0) {
    throw PreconditionError("quantize: kernel cutoff reaches the boundary r0 (shrink kappa_width or move rows)");
  }
  const double cz = h / dr;
  const double rho_edge = std::numbers::pi * cz;
  const auto band = static_cast<long>(std::ceil(kappa_width / dr));
  int nfft = 64;
  while (nfft < 4 * band + 8) nfft *= 2;
  std::vector<double> rho(static_cast<std::size_t>(nfft));
  for (int m = 0; m < nfft; ++m) {
    const int mm = m < nfft / 2 ? m : m - nfft;
    rho[static_cast<std::size_t>(m)] = 2.0 * rho_edge * mm / nfft;
  }
  std::vector<double> kap(static_cast<std::size_t>(2 * band + 1));
  for (long d = -band; d <= band; ++d) kap[static_cast<std::size_t>(d + band)] = bumps::kappa(static_cast<double>(d) * dr, kappa_width);

  FftwBuffers fft(nfft);
  const auto rows = static_cast<Eigen::Index>(row_end - row_begin);
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(rows, static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = row_begin; i < row_end; ++i) {
    const double r = grid.node(i);
    double amax = 0.0, edge = 0.0, spread = 0.0;
    const double a_zero = a(r, 0.0);
    for (int m = 0; m < nfft; ++m) {
      const double v = a(r, rho[static_cast<std::size_t>(m)]);
      fft.in[m][0] = v;
      fft.in[m][1] = 0.0;
      amax = std::max(amax, std::fabs(v));
      spread = std::max(spread, std::fabs(v - a_zero));
      if (std::fabs(rho[static_cast<std::size_t>(m)]) >= 0.9 * rho_edge) edge = std::max(edge, std::fabs(v));
    }
    // a symbol independent of rho is a multiplication operator and is quantized exactly
    const bool multiplication = spread <= 1e-12 * std::max(1.0, amax);
    if (!multiplication && edge > 1e-12 * std::max(1.0, amax)) {
      std::ostringstream os;
      os << "quantize: symbol does not vanish at the edge of the rho grid (|rho| = " << rho_edge << ") at r = " << r;
      throw PreconditionError(os.str());
    }
    fftw_execute(fft.plan);
    const auto row = static_cast<Eigen::Index>(i - row_begin);
    for (long d = -band; d <= band; ++d) {
      const long j = static_cast<long>(i) - d;
      if (j < 0 || j >= static_cast<long>(grid.n)) continue;
      const int idx = static_cast<int>(((d % nfft) + nfft) % nfft);
      const double kw = kap[static_cast<std::size_t>(d + band)];
      K(row, j) = std::complex<double>(fft.out[idx][0], fft.out[idx][1]) * (kw / nfft);
    }
  }
  return K;
}

SpectralCutoff SpectralCutoff::dyadic() { return {bumps::phi_spec, bumps::kSpecLo, bumps::kSpecHi}; }

SpectralCutoff SpectralCutoff::wide() {
  constexpr double lo = 0.02, hi = 30.0;
  return {[](double lambda) {
            if (!(lambda > lo) || lambda >= hi) return 0.0;
            return bumps::plateau(std::log(lambda), std::log(lo), std::log(0.5), std::log(2.0), std::log(hi));
          },
          lo, hi};
}

Symbol principal_symbol(const WarpProfile& profile, double h, double mu, KineticSymbol kinetic, double c,
                        const SpectralCutoff& cutoff) {
  return [profile, h, mu, kinetic, c, f = cutoff.f](double r, double rho) {
    const double t = kinetic == KineticSymbol::Lattice ? 2.0 * c * c * (1.0 - std::cos(rho / c)) : rho * rho;
    const double v = mu == 0.0 ? 0.0 : h * h * mu * mu * std::exp(2.0 * profile.phi(r));
    return f(t + v);
  };
}

double operator_norm(const Eigen::MatrixXcd& A, int max_steps) {
  const Eigen::Index n = A.cols();
  if (n == 0 || A.rows() == 0) return 0.0;
  const int k = static_cast<int>(std::min<Eigen::Index>(max_steps, n));
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd Q(n, k + 1);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = std::complex<double>(g(rng), g(rng));
  Q.col(0) = v.normalized();
  std::vector<double> alpha, beta;
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXcd w = A.adjoint() * (A * Q.col(j));
    const double aj = Q.col(j).dot(w).real();
    alpha.push_back(aj);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) w -= Q.col(i) * Q.col(i).dot(w);
    }
    const double bj = w.norm();
    if (bj <= 1e-13 * std::max(1.0, std::fabs(aj)) || j + 1 == k) break;
    beta.push_back(bj);
    Q.col(j + 1) = w / bj;
  }
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    T(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

SymbolCheck symbol_vs_calculus(const WarpProfile& profile, double h, double mu, const EigenSystem& es, double r1,
                               double r2, double ramp, double kappa_width, KineticSymbol kinetic,
                               const SpectralCutoff& cutoff) {
  if (!es.covers(cutoff.lo / (h * h), cutoff.hi / (h * h))) {
    throw PreconditionError("symbol_vs_calculus: eigensystem does not cover the support of f(h^2 lambda)");
  }
  if (!(r1 > profile.r0())) throw PreconditionError("symbol_vs_calculus: localization must stay away from r0");
  if (!(r2 > r1 + 2.0 * ramp)) throw PreconditionError("symbol_vs_calculus: need r2 > r1 + 2 ramp");
  const RadialGrid& grid = es.grid;
  const double dr = grid.dr();
  std::size_t rb = 0;
  while (rb < grid.n && grid.node(rb) <= r1) ++rb;
  std::size_t re = rb;
  while (re < grid.n && grid.node(re) < r2) ++re;
  if (re == rb) throw PreconditionError("symbol_vs_calculus: localization misses the grid");
  const auto rows = static_cast<Eigen::Index>(re - rb);

  Eigen::VectorXd xi(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double r = grid.node(rb + static_cast<std::size_t>(i));
    xi[i] = bumps::smooth_step((r - r1) / ramp) * (std::isinf(r2) ? 1.0 : bumps::smooth_step((r2 - r) / ramp));
  }

  Eigen::VectorXd f(es.values.size());
  for (Eigen::Index j = 0; j < f.size(); ++j) f[j] = cutoff.f(h * h * es.values[j]);
  const Eigen::MatrixXd Vr = es.vectors.middleRows(static_cast<Eigen::Index>(rb), rows);
  const Eigen::MatrixXd Acalc = (Vr * f.asDiagonal()) * es.vectors.transpose() * dr;

  const Symbol a0 = principal_symbol(profile, h, mu, kinetic, h / dr, cutoff);
  Eigen::MatrixXcd E = quantize(a0, h, kappa_width, grid, rb, re);
  double sup = 0.0;
  for (Eigen::Index i = 0; i < rows; i += 8) {
    for (int m = -64; m <= 64; ++m) sup = std::max(sup, std::fabs(a0(grid.node(rb + static_cast<std::size_t>(i)), m / 32.0)));
  }
  E = xi.asDiagonal() * (Acalc.cast<std::complex<double>>() - E);
  SymbolCheck out;
  out.error = operator_norm(E);
  out.calculus_norm = operator_norm((xi.asDiagonal() * Acalc).cast<std::complex<double>>());
  out.symbol_sup = sup;
  return out;
}

// ---- flows ----------------------------------------------------------------

double hamiltonian(const FlowSetup& setup, double x, double xi) {
  const double v = setup.mu == 0.0 ? 0.0 : setup.h * setup.h * setup.mu * setup.mu * std::exp(2.0 * setup.profile.phi(x));
  const double H = xi * xi + v;
  return setup.kind == HamiltonianKind::Schrodinger ? H : std::sqrt(H);
}

namespace {

using Vec7 = std::array<double, 7>;  // x, xi, a, b, c, d, S

Vec7 rhs(const FlowSetup& st, const Vec7& y) {
  const double x = y[0], xi = y[1];
  double V = 0.0, V1 = 0.0, V2 = 0.0;
  if (st.mu != 0.0) {
    const double p1 = st.profile.derivative(1, x);
    const double p2 = st.profile.derivative(2, x);
    V = st.h * st.h * st.mu * st.mu * std::exp(2.0 * st.profile.phi(x));
    V1 = 2.0 * p1 * V;
    V2 = (2.0 * p2 + 4.0 * p1 * p1) * V;
  }
  double xdot, xidot, jxx, jxk, jkx, jkk, sdot;
  if (st.kind == HamiltonianKind::Schrodinger) {
    xdot = 2.0 * xi;
    xidot = -V1;
    jxx = 0.0;
    jxk = 2.0;
    jkx = -V2;
    jkk = 0.0;
    sdot = xi * xi - V;
  } else {
    const double G = std::sqrt(xi * xi + V);
    const double G3 = G * G * G;
    xdot = xi / G;
    xidot = -V1 / (2.0 * G);
    jxx = -xi * V1 / (2.0 * G3);
    jxk = V / G3;
    jkx = -V2 / (2.0 * G) + V1 * V1 / (4.0 * G3);
    jkk = xi * V1 / (2.0 * G3);
    sdot = -V / G;
  }
  const double a = y[2], b = y[3], c = y[4], d = y[5];
  return {xdot, xidot, jxx * a + jxk * c, jxx * b + jxk * d, jkx * a + jkk * c, jkx * b + jkk * d, sdot};
}

Vec7 axpy(const Vec7& y, double s, const Vec7& k) {
  Vec7 out;
  for (std::size_t i = 0; i < 7; ++i) out[i] = y[i] + s * k[i];
  return out;
}

}  // namespace

int default_flow_steps(double s_max) {
  return std::max(64, static_cast<int>(std::ceil(4096.0 * std::fabs(s_max))));
}

std::vector<FlowState> flow(const FlowSetup& setup, double x0, double xi0, double s_max, int steps) {
  if (steps < 1) throw PreconditionError("flow: steps must be >= 1");
  if (setup.kind == HamiltonianKind::HalfWave && !(hamiltonian(setup, x0, xi0) > 0.0)) {
    throw PreconditionError("flow: half-wave flow needs H > 0 at the initial point");
  }
  const double limit = setup.profile.r0() + setup.boundary_margin;
  if (x0 <= limit) throw NumericalError("flow: initial point at or below the boundary");
  const double ds = s_max / steps;
  Vec7 y{x0, xi0, 1.0, 0.0, 0.0, 1.0, 0.0};
  std::vector<FlowState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  auto push = [&](double s) { out.push_back(FlowState{s, y[0], y[1], y[2], y[3], y[4], y[5], y[6]}); };
  push(0.0);
  for (int n = 0; n < steps; ++n) {
    const Vec7 k1 = rhs(setup, y);
    const Vec7 k2 = rhs(setup, axpy(y, ds / 2.0, k1));
    const Vec7 k3 = rhs(setup, axpy(y, ds / 2.0, k2));
    const Vec7 k4 = rhs(setup, axpy(y, ds, k3));
    for (std::size_t i = 0; i < 7; ++i) y[i] += ds / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const double s = ds * (n + 1);
    if (!(y[0] > limit)) {
      std::ostringstream os;
      os << "flow: trajectory hit the boundary r <= " << limit << " at s = " << s;
      throw NumericalError(os.str());
    }
    push(s);
  }
  return out;
}

double phase_hessian(const FlowSetup& setup, double r, double rho, double t, double eta_lo, double eta_hi) {
  if (!(eta_hi > eta_lo)) throw PreconditionError("phase_hessian: empty eta bracket");
  const int steps = default_flow_steps(t);
  auto end = [&](double eta) { return flow(setup, r, eta, t, steps).back(); };
  constexpr int kDiv = 64;
  std::vector<double> eta(kDiv + 1), F(kDiv + 1);
  for (int i = 0; i <= kDiv; ++i) {
    eta[i] = eta_lo + (eta_hi - eta_lo) * i / kDiv;
    F[i] = end(eta[i]).xi - rho;
  }
  int best = -1;
  double best_dist = 0.0;
  for (int i = 0; i < kDiv; ++i) {
    if ((F[i] <= 0.0 && F[i + 1] >= 0.0) || (F[i] >= 0.0 && F[i + 1] <= 0.0)) {
      const double dist = std::fabs(0.5 * (eta[i] + eta[i + 1]) - rho);
      if (best < 0 || dist < best_dist) {
        best = i;
        best_dist = dist;
      }
    }
  }
  if (best < 0) {
    std::ostringstream os;
    os << "phase_hessian: no eta with xi^t(r, eta) = rho in bracket (r = " << r << ", rho = " << rho << ", t = " << t << ")";
    throw NumericalError(os.str());
  }
  double lo = eta[best], hi = eta[best + 1];
  double flo = F[best];
  double e = 0.5 * (lo + hi);
  FlowState st = end(e);
  for (int it = 0; it < 100; ++it) {
    const double f = st.xi - rho;
    if (std::fabs(f) < 1e-14) break;
    if ((f < 0.0) == (flo < 0.0)) {
      lo = e;
      flo = f;
    } else {
      hi = e;
    }
    double next = e - f / st.d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::fabs(next - e);
    e = next;
    st = end(e);
    if (step < 1e-12) break;
  }
  return st.b / st.d;
}

VanDerCorputResult van_der_corput_check(const std::vector<double>& rho, const std::vector<double>& S,
                                        const std::vector<double>& b, double lower) {
  const std::size_t n = rho.size();
  if (n < 5 || S.size() != n || b.size() != n) throw PreconditionError("van_der_corput_check: need >= 5 matching samples");
  if (!(lower > 0.0)) throw PreconditionError("van_der_corput_check: lower bound must be positive");
  const double dr = (rho.back() - rho.front()) / static_cast<double>(n - 1);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double s2 = (S[j + 1] - 2.0 * S[j] + S[j - 1]) / (dr * dr);
    if (s2 < lower * (1.0 - 1e-6)) {
      std::ostringstream os;
      os << "van_der_corput_check: S'' = " << s2 << " below the stated lower bound " << lower << " at rho = " << rho[j];
      throw PreconditionError(os.str());
    }
  }
  const std::vector<double> w = [&] {
    std::vector<double> ww(n, dr);
    ww.front() = ww.back() = dr / 2.0;
    return ww;
  }();
  std::complex<double> acc = 0.0;
  double bsup = 0.0, bvar = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += w[j] * b[j] * std::polar(1.0, S[j]);
    bsup = std::max(bsup, std::fabs(b[j]));
    if (j + 1 < n) bvar += std::fabs(b[j + 1] - b[j]);
  }
  VanDerCorputResult out;
  out.lhs = std::abs(acc);
  out.bound = (bsup + bvar) / std::sqrt(lower);
  out.satisfied = out.lhs <= 3.0 * out.bound;
  return out;
}

// ---- coherent states ------------------------------------------------------

double CoherentState::x0() const { return -std::log(h); }

Eigen::VectorXd CoherentState::profile(const Eigen::VectorXd& r) const {
  const double norm = std::pow(std::numbers::pi * h, -0.25);
  Eigen::VectorXd out(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double y = r[i] - x0();
    out[i] = norm * bumps::chi(y) * std::exp(-y * y / (2.0 * h));
  }
  return out;
}

Eigen::VectorXcd coherent_evolve_leading(const CoherentState& cs, const std::vector<FlowState>& traj,
                                         std::size_t index, const Eigen::VectorXd& r) {
  if (index >= traj.size()) throw PreconditionError("coherent_evolve_leading: index past the trajectory");
  using C = std::complex<double>;
  double arg = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j <= index; ++j) {
    const C z(traj[j].a, traj[j].b);
    if (std::abs(z) < 1e-14) {
      std::ostringstream os;
      os << "coherent_evolve_leading: caustic (a + ib = 0) at s = " << traj[j].s;
      throw NumericalError(os.str());
    }
    const double cur = std::arg(z);
    double jump = cur - prev;
    while (jump > std::numbers::pi) jump -= 2.0 * std::numbers::pi;
    while (jump < -std::numbers::pi) jump += 2.0 * std::numbers::pi;
    arg += (j == 0 ? cur : jump);
    prev = cur;
  }
  const FlowState& st = traj[index];
  const double mod = std::abs(C(st.a, st.b));
  const C amp = std::pow(std::numbers::pi * cs.h, -0.25) * std::polar(1.0 / std::sqrt(mod), -arg / 2.0);
  const C gam = st.gamma();
  Eigen::VectorXcd out(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double y = r[i] - st.x;
    const double cut = bumps::chi(y);
    if (cut == 0.0) {
      out[i] = 0.0;
      continue;
    }
    const C phase = (C(st.S + st.xi * y, 0.0) + gam * (y * y / 2.0)) * C(0.0, 1.0 / cs.h);
    out[i] = amp * cut * std::exp(phase);
  }
  return out;
}

}  // namespace cuspwave
