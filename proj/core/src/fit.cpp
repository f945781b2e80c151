#include <algorithm>
#include <cmath>
#include <set>

#include "cuspwave/errors.hpp"
#include "cuspwave/report.hpp"

namespace cuspwave {

ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 4) throw PreconditionError("fit_power_law: need at least 4 points");
  std::set<double> xs;
  ScalingFit fit;
  for (const auto& [x, y] : xy) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw DomainError("fit_power_law: x and y must be positive and finite");
    }
    if (!xs.insert(x).second) throw PreconditionError("fit_power_law: x values must be distinct");
    fit.points.emplace_back(std::log(x), std::log(y));
  }
  const double n = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [lx, ly] : fit.points) {
    mx += lx;
    my += ly;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [lx, ly] : fit.points) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
    syy += (ly - my) * (ly - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // constant data is fitted exactly
  fit.r_squared = syy <= 1e-28 * std::max(1.0, my * my) ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

}  // namespace cuspwave
