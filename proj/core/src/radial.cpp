#include "cuspwave/radial.hpp"

#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "cuspwave/bumps.hpp"
#include "cuspwave/errors.hpp"

namespace cuspwave {

static_assert(std::endian::native == std::endian::little, "cache format assumes a little-endian host");

RadialGrid RadialGrid::make(double r0, double rmax, std::size_t n) {
  if (!(rmax > r0)) throw PreconditionError("radial grid needs rmax > r0");
  if (n < 16) throw PreconditionError("radial grid needs n >= 16");
  return RadialGrid{r0, rmax, n};
}

RadialGrid RadialGrid::with_step(double r0, double rmax, double dr_max) {
  if (!(dr_max > 0.0)) throw PreconditionError("radial grid step must be positive");
  const auto intervals = static_cast<std::size_t>(std::ceil((rmax - r0) / dr_max - 1e-9));
  return make(r0, rmax, std::max<std::size_t>(intervals, 17) - 1);
}

Eigen::VectorXd RadialGrid::nodes() const {
  Eigen::VectorXd r(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) r[static_cast<Eigen::Index>(i)] = node(i);
  return r;
}

namespace {

template <class Vec>
Vec tridiag_apply(const Eigen::VectorXd& d, double o, const Vec& u) {
  const Eigen::Index n = d.size();
  Vec out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto acc = d[i] * u[i];
    if (i > 0) acc += o * u[i - 1];
    if (i + 1 < n) acc += o * u[i + 1];
    out[i] = acc;
  }
  return out;
}

// Post-processing shared by the full and windowed solvers.
void finish(EigenSystem& es, const RadialOperator& op) {
  const double dr = op.grid.dr();
  es.vectors /= std::sqrt(dr);
  for (Eigen::Index j = 0; j < es.vectors.cols(); ++j) {
    auto col = es.vectors.col(j);
    const double cut = 1e-10 * col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::fabs(col[i]) > cut) {
        if (col[i] < 0.0) col *= -1.0;
        break;
      }
    }
  }
  es.tol_neg = 1e-8 * op.max_abs_diag();
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    double& lam = es.values[j];
    if (lam < -es.tol_neg) {
      std::ostringstream os;
      os << "eigendecompose: eigenvalue " << lam << " below -tol_neg for mu = " << op.mu << ", n = " << op.grid.n;
      throw NumericalError(os.str());
    }
    if (lam < 0.0) lam = 0.0;
  }
}

std::string describe(const RadialOperator& op) {
  std::ostringstream os;
  os << "operator(mu=" << op.mu << ", r0=" << op.grid.r0 << ", rmax=" << op.grid.rmax << ", n=" << op.grid.n << ")";
  return os.str();
}

}  // namespace

Eigen::VectorXd RadialOperator::apply(const Eigen::VectorXd& u) const { return tridiag_apply(diag, offdiag, u); }

Eigen::VectorXcd RadialOperator::apply(const Eigen::VectorXcd& u) const { return tridiag_apply(diag, offdiag, u); }

double RadialOperator::max_abs_diag() const { return diag.cwiseAbs().maxCoeff(); }

RadialOperator discretize(const WarpProfile& profile, double mu, const RadialGrid& grid) {
  if (!(mu >= 0.0)) throw DomainError("discretize: mu must be >= 0");
  if (grid.r0 != profile.r0()) throw PreconditionError("discretize: grid.r0 must equal profile.r0");
  RadialOperator op;
  op.grid = grid;
  op.mu = mu;
  const double dr = grid.dr();
  op.offdiag = -1.0 / (dr * dr);
  op.diag.resize(static_cast<Eigen::Index>(grid.n));
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double r = grid.node(i);
    const double pot = mu == 0.0 ? 0.0 : mu * mu * std::exp(2.0 * profile.phi(r));
    op.diag[static_cast<Eigen::Index>(i)] = 2.0 / (dr * dr) + pot + profile.w(r);
  }
  return op;
}

EigenSystem eigendecompose(const RadialOperator& op) {
  const auto n = static_cast<lapack_int>(op.grid.n);
  std::vector<double> d(op.diag.data(), op.diag.data() + n);
  std::vector<double> e(static_cast<std::size_t>(n), op.offdiag);
  EigenSystem es;
  es.grid = op.grid;
  es.mu = op.mu;
  es.values.resize(n);
  es.vectors.resize(n, n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  lapack_int m = 0;
  lapack_logical tryrac = 1;
  const lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, &m,
                                         es.values.data(), es.vectors.data(), n, n, isuppz.data(), &tryrac);
  if (info != 0 || m != n) throw NumericalError("eigensolver failed (info " + std::to_string(info) + ") on " + describe(op));
  es.complete = true;
  finish(es, op);
  return es;
}

EigenSystem eigendecompose(const RadialOperator& op, SpectralWindow window) {
  if (!(window.hi > window.lo)) throw PreconditionError("spectral window must have hi > lo");
  const auto n = static_cast<lapack_int>(op.grid.n);
  std::vector<double> d(op.diag.data(), op.diag.data() + n);
  std::vector<double> e(static_cast<std::size_t>(n), op.offdiag);
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  lapack_int m = 0;
  lapack_logical tryrac = 1;
  double query = 0.0;
  lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'V', n, d.data(), e.data(), window.lo, window.hi, 0, 0, &m,
                                   w.data(), &query, n, -1, isuppz.data(), &tryrac);
  if (info != 0) throw NumericalError("eigensolver size query failed on " + describe(op));
  const auto nzc = std::max<lapack_int>(1, static_cast<lapack_int>(query));
  Eigen::MatrixXd z(n, nzc);
  d.assign(op.diag.data(), op.diag.data() + n);
  e.assign(static_cast<std::size_t>(n), op.offdiag);
  tryrac = 1;
  info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'V', n, d.data(), e.data(), window.lo, window.hi, 0, 0, &m, w.data(),
                        z.data(), n, nzc, isuppz.data(), &tryrac);
  if (info != 0) throw NumericalError("eigensolver failed (info " + std::to_string(info) + ") on " + describe(op));
  EigenSystem es;
  es.grid = op.grid;
  es.mu = op.mu;
  es.values = Eigen::Map<Eigen::VectorXd>(w.data(), m);
  es.vectors = z.leftCols(m);
  es.complete = (m == n);
  if (!es.complete) {
    es.window_lo = window.lo;
    es.window_hi = window.hi;
  }
  finish(es, op);
  return es;
}

double lowest_eigenvalue(const RadialOperator& op) {
  const auto n = static_cast<lapack_int>(op.grid.n);
  std::vector<double> d(op.diag.data(), op.diag.data() + n);
  std::vector<double> e(static_cast<std::size_t>(n), op.offdiag);
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<lapack_int> isuppz(2);
  lapack_int m = 0;
  lapack_logical tryrac = 1;
  double z = 0.0;
  const lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'N', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, 1, &m,
                                         w.data(), &z, 1, 1, isuppz.data(), &tryrac);
  if (info != 0 || m != 1) throw NumericalError("lowest eigenvalue failed on " + describe(op));
  return w[0];
}

Eigen::VectorXd EigenSystem::coefficients(const Eigen::VectorXd& u) const {
  return (vectors.transpose() * u) * grid.dr();
}

Eigen::VectorXcd EigenSystem::coefficients(const Eigen::VectorXcd& u) const {
  Eigen::VectorXcd c(vectors.cols());
  c.real() = vectors.transpose() * u.real();
  c.imag() = vectors.transpose() * u.imag();
  return c * grid.dr();
}

Eigen::VectorXd EigenSystem::synthesize(const Eigen::VectorXd& c) const { return vectors * c; }

Eigen::VectorXcd EigenSystem::synthesize(const Eigen::VectorXcd& c) const {
  Eigen::VectorXcd u(vectors.rows());
  u.real() = vectors * c.real();
  u.imag() = vectors * c.imag();
  return u;
}

Eigen::MatrixXcd EigenSystem::synthesize(const Eigen::MatrixXcd& c) const {
  Eigen::MatrixXcd u(vectors.rows(), c.cols());
  u.real() = vectors * c.real();
  u.imag() = vectors * c.imag();
  return u;
}

namespace {

template <class F>
auto checked_multipliers(const EigenSystem& es, const F& f) {
  using R = decltype(f(0.0));
  Eigen::Matrix<R, Eigen::Dynamic, 1> m(es.values.size());
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    m[j] = f(es.values[j]);
    if (!std::isfinite(std::abs(m[j]))) {
      std::ostringstream os;
      os << "apply_function: f is not finite at lambda_" << j << " = " << es.values[j];
      throw DomainError(os.str());
    }
  }
  return m;
}

}  // namespace

Eigen::VectorXd apply_function(const EigenSystem& es, const std::function<double(double)>& f,
                               const Eigen::VectorXd& u) {
  if (u.size() != es.vectors.rows()) throw PreconditionError("apply_function: vector length mismatch");
  const Eigen::VectorXd m = checked_multipliers(es, f);
  return es.synthesize(Eigen::VectorXd(m.cwiseProduct(es.coefficients(u))));
}

Eigen::VectorXcd apply_function(const EigenSystem& es, const std::function<std::complex<double>(double)>& f,
                                const Eigen::VectorXcd& u) {
  if (u.size() != es.vectors.rows()) throw PreconditionError("apply_function: vector length mismatch");
  const Eigen::VectorXcd m = checked_multipliers(es, f);
  return es.synthesize(Eigen::VectorXcd(m.cwiseProduct(es.coefficients(u))));
}

Eigen::VectorXd solve_shifted(const RadialOperator& op, double shift, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = op.diag.size();
  if (rhs.size() != n) throw PreconditionError("solve_shifted: vector length mismatch");
  const double o = op.offdiag;
  Eigen::VectorXd c(n), x(n);
  double denom = op.diag[0] + shift;
  c[0] = o / denom;
  x[0] = rhs[0] / denom;
  for (Eigen::Index i = 1; i < n; ++i) {
    denom = op.diag[i] + shift - o * c[i - 1];
    c[i] = o / denom;
    x[i] = (rhs[i] - o * x[i - 1]) / denom;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
  return x;
}

Eigen::VectorXd central_derivative(const Eigen::VectorXd& u, double dr) {
  const Eigen::Index n = u.size();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double left = i > 0 ? u[i - 1] : 0.0;
    const double right = i + 1 < n ? u[i + 1] : 0.0;
    out[i] = (right - left) / (2.0 * dr);
  }
  return out;
}

double grid_norm(const Eigen::VectorXd& u, double dr) { return std::sqrt(dr * u.squaredNorm()); }

double grid_norm(const Eigen::VectorXcd& u, double dr) { return std::sqrt(dr * u.squaredNorm()); }

namespace {

Eigen::VectorXd random_unit(std::mt19937_64& rng, std::size_t n, double dr) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  for (auto& x : u) x = g(rng);
  return u / grid_norm(u, dr);
}

}  // namespace

double elliptic_weight_check(const WarpProfile& profile, const RadialGrid& grid, const std::vector<Mode>& modes,
                             int N, int N1, int N2, int samples, std::uint64_t seed, double r1) {
  if (N < 1 || N1 < 0 || N2 < 0 || N1 + 2 * N2 > 2 * N) {
    throw PreconditionError("elliptic_weight_check: need N >= 1 and N1 + 2 N2 <= 2 N");
  }
  if (!(r1 > profile.r0())) throw PreconditionError("elliptic_weight_check: cutoff must sit at r1 > r0");
  const double dr = grid.dr();
  const Eigen::VectorXd r = grid.nodes();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const auto& md : modes) {
    if (md.mu == 0.0) continue;
    const RadialOperator op = discretize(profile, md.mu, grid);
    Eigen::VectorXd xi(r.size()), weight(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      xi[i] = bumps::smooth_step(r[i] - r1);
      weight[i] = std::pow(md.mu, 2.0 * N2) * std::exp(2.0 * N2 * profile.phi(r[i]));
    }
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd y = random_unit(rng, grid.n, dr);
      for (int j = 0; j < N; ++j) y = solve_shifted(op, 1.0, y);
      y = xi.cwiseProduct(y);
      for (int j = 0; j < N1; ++j) y = central_derivative(y, dr);
      worst = std::max(worst, grid_norm(Eigen::VectorXd(weight.cwiseProduct(y)), dr));
    }
  }
  return worst;
}

double rough_sobolev_check(const WarpProfile& profile, const RadialGrid& grid, const std::vector<Mode>& modes,
                           int N, int samples, std::uint64_t seed) {
  if (N < 1) throw PreconditionError("rough_sobolev_check: need N >= 1");
  const double dr = grid.dr();
  const Eigen::VectorXd r = grid.nodes();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const auto& md : modes) {
    if (md.mu == 0.0) continue;
    const RadialOperator op = discretize(profile, md.mu, grid);
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd y = random_unit(rng, grid.n, dr);
      for (int j = 0; j < 2 * N; ++j) y = solve_shifted(op, 1.0, y);
      double sup = 0.0;
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        sup = std::max(sup, std::fabs(std::exp((2.0 * N + 0.5) * profile.phi(r[i])) * y[i]));
      }
      worst = std::max(worst, sup);
    }
  }
  return worst;
}

void write_eigensystem(const std::string& path, const EigenSystem& es) {
  if (!es.complete) throw PreconditionError("write_eigensystem: only complete eigensystems can be cached");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const char magic[8] = {'C', 'U', 'S', 'P', 'E', 'I', 'G', '1'};
  out.write(magic, 8);
  const double hdr[3] = {es.grid.r0, es.grid.rmax, es.mu};
  out.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
  const std::int64_t n = static_cast<std::int64_t>(es.grid.n);
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(es.values.data()), static_cast<std::streamsize>(sizeof(double) * es.values.size()));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = es.vectors;
  out.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * rm.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

EigenSystem read_eigensystem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "CUSPEIG1", 8) != 0) throw std::runtime_error(path + ": bad magic");
  double hdr[3];
  std::int64_t n = 0;
  in.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in || n < 16) throw std::runtime_error(path + ": bad header");
  EigenSystem es;
  es.grid = RadialGrid::make(hdr[0], hdr[1], static_cast<std::size_t>(n));
  es.mu = hdr[2];
  es.values.resize(n);
  in.read(reinterpret_cast<char*>(es.values.data()), static_cast<std::streamsize>(sizeof(double) * n));
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(n, n);
  in.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * n * n));
  if (!in) throw std::runtime_error(path + ": truncated");
  es.vectors = rm;
  es.complete = true;
  return es;
}

}  // namespace cuspwave
