#pragma once
// Internal helpers shared by the experiment sources.

#include <chrono>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cuspwave/angular.hpp"
#include "cuspwave/geometry.hpp"
#include "cuspwave/propagate.hpp"
#include "cuspwave/radial.hpp"
#include "cuspwave/report.hpp"

namespace cuspwave::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::vector<std::pair<double, double>> zip(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) out.emplace_back(x[i], y[i]);
  return out;
}

inline bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

inline CuspState single_mode(const Mode& mode, const RadialGrid& grid, const Eigen::VectorXcd& u) {
  CuspState s{{mode}, grid, {u}};
  return s;
}

inline Eigen::VectorXcd complex_gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v[i] = std::complex<double>(re, im);
  }
  return v;
}

// Smallest r >= r0 with phi(r) >= value (bisection, phi increasing).
double warp_inverse(const WarpProfile& profile, double value);

// Same warp, domain cut at a new left end r0 (Dirichlet there).
inline WarpProfile truncated(const WarpProfile& profile, double r0) {
  return WarpProfile::make(profile.kind(), profile.sigma(), r0);
}

std::string describe(const WarpProfile& profile);

inline void set_profile(ExperimentReport& rep, const WarpProfile& profile) {
  rep.settings["profile"] = describe(profile);
}

}  // namespace cuspwave::detail
