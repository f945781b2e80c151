#include "cuspwave/angular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "cuspwave/errors.hpp"

namespace cuspwave {

AngularManifold AngularManifold::unit_circle() { return AngularManifold{{2.0 * std::numbers::pi}}; }

Mode make_mode(const AngularManifold& manifold, std::size_t component, int m, Parity parity) {
  if (component >= manifold.circumferences.size()) throw PreconditionError("mode component out of range");
  if (m < 0 || (m == 0) != (parity == Parity::Const)) throw PreconditionError("inconsistent mode (m, parity)");
  Mode md;
  md.component = component;
  md.m = m;
  md.parity = parity;
  md.mu = 2.0 * std::numbers::pi * m / manifold.circumferences[component];
  return md;
}

std::vector<Mode> modes_up_to(const AngularManifold& manifold, double mu_max) {
  if (!(mu_max >= 0.0)) throw PreconditionError("modes_up_to: mu_max must be >= 0");
  std::vector<Mode> out;
  for (std::size_t c = 0; c < manifold.circumferences.size(); ++c) {
    const double l = manifold.circumferences[c];
    if (!(l > 0.0)) throw PreconditionError("circumferences must be positive");
    out.push_back(make_mode(manifold, c, 0, Parity::Const));
    const int mmax = static_cast<int>(std::floor(mu_max * l / (2.0 * std::numbers::pi) + 1e-12));
    for (int m = 1; m <= mmax; ++m) {
      out.push_back(make_mode(manifold, c, m, Parity::Cos));
      out.push_back(make_mode(manifold, c, m, Parity::Sin));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Mode& a, const Mode& b) {
    return std::make_tuple(a.mu, a.component, a.m, static_cast<int>(a.parity)) <
           std::make_tuple(b.mu, b.component, b.m, static_cast<int>(b.parity));
  });
  for (std::size_t k = 0; k < out.size(); ++k) out[k].k = k;
  return out;
}

std::vector<bool> project(const std::vector<Mode>& modes, Projection which) {
  return project(modes, std::vector<bool>(modes.size(), true), which);
}

std::vector<bool> project(const std::vector<Mode>& modes, const std::vector<bool>& mask, Projection which) {
  if (mask.size() != modes.size()) throw PreconditionError("project: mask size mismatch");
  std::vector<bool> out(modes.size());
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const bool zero = modes[k].mu == 0.0;
    out[k] = mask[k] && (which == Projection::Pi ? zero : !zero);
  }
  return out;
}

double basis_value(const Mode& mode, const AngularManifold& manifold, double theta) {
  const double l = manifold.circumferences.at(mode.component);
  const double arg = 2.0 * std::numbers::pi * mode.m * theta / l;
  switch (mode.parity) {
    case Parity::Const: return 1.0 / std::sqrt(l);
    case Parity::Cos: return std::sqrt(2.0 / l) * std::cos(arg);
    case Parity::Sin: return std::sqrt(2.0 / l) * std::sin(arg);
  }
  return 0.0;
}

std::size_t min_theta_points(const std::vector<Mode>& modes) {
  int mmax = 0;
  for (const auto& md : modes) mmax = std::max(mmax, md.m);
  return static_cast<std::size_t>(4 * mmax + 4);
}

std::size_t default_theta_points(const std::vector<Mode>& modes) {
  int mmax = 0;
  for (const auto& md : modes) mmax = std::max(mmax, md.m);
  return std::max<std::size_t>(static_cast<std::size_t>(8 * mmax), min_theta_points(modes));
}

Eigen::MatrixXd basis_matrix(const std::vector<Mode>& modes, const AngularManifold& manifold,
                             std::size_t component, std::size_t theta_points) {
  const double l = manifold.circumferences.at(component);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(modes.size()),
                                            static_cast<Eigen::Index>(theta_points));
  for (std::size_t k = 0; k < modes.size(); ++k) {
    if (modes[k].component != component) continue;
    for (std::size_t j = 0; j < theta_points; ++j) {
      const double theta = l * static_cast<double>(j) / static_cast<double>(theta_points);
      B(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = basis_value(modes[k], manifold, theta);
    }
  }
  return B;
}

AngularValues synthesize(const std::vector<Mode>& modes, const AngularManifold& manifold,
                         const std::vector<std::complex<double>>& coeffs, std::size_t theta_points) {
  if (coeffs.size() != modes.size()) throw PreconditionError("synthesize: coefficient count mismatch");
  if (theta_points < min_theta_points(modes)) throw PreconditionError("synthesize: theta grid too coarse for retained modes");
  AngularValues out(manifold.circumferences.size(), std::vector<std::complex<double>>(theta_points));
  for (std::size_t c = 0; c < out.size(); ++c) {
    const double l = manifold.circumferences[c];
    for (std::size_t j = 0; j < theta_points; ++j) {
      const double theta = l * static_cast<double>(j) / static_cast<double>(theta_points);
      std::complex<double> acc = 0.0;
      for (std::size_t k = 0; k < modes.size(); ++k) {
        if (modes[k].component == c) acc += coeffs[k] * basis_value(modes[k], manifold, theta);
      }
      out[c][j] = acc;
    }
  }
  return out;
}

std::vector<std::complex<double>> analyze(const std::vector<Mode>& modes, const AngularManifold& manifold,
                                          const AngularValues& values) {
  if (values.size() != manifold.circumferences.size()) throw PreconditionError("analyze: component count mismatch");
  std::vector<std::complex<double>> out(modes.size());
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto& vals = values[modes[k].component];
    const std::size_t N = vals.size();
    if (N < min_theta_points(modes)) throw PreconditionError("analyze: theta grid too coarse for retained modes");
    const double l = manifold.circumferences[modes[k].component];
    const double wgt = l / static_cast<double>(N);
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      acc += vals[j] * basis_value(modes[k], manifold, l * static_cast<double>(j) / static_cast<double>(N));
    }
    out[k] = acc * wgt;
  }
  return out;
}

}  // namespace cuspwave
