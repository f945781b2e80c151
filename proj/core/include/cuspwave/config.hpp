#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cuspwave/errors.hpp"
#include "cuspwave/experiments.hpp"
#include "cuspwave/geometry.hpp"
#include "cuspwave/report.hpp"

namespace cuspwave {

// Line-oriented `section.key = value` text; `#` starts a comment; lists are written [a, b, c].
//
//   experiment = sharpness          required; a catalog name or "suite"
//   seed = 42                       unsigned 64-bit
//   jobs = 1                        >= 1
//   out_dir = cuspwave-out
//   geometry.kind = exp | cosh | power
//   geometry.sigma = 2              required for power, rejected otherwise
//   geometry.r0 = 0
//   angular.circumferences = [6.283185307179586]
//   angular.mu_max = 20
//   radial.rmax = 40
//   radial.n = 2000
//   param.<name> = value or list    must be a knob of the chosen experiment
struct RunConfig {
  std::string experiment;
  std::optional<WarpKind> kind;
  std::optional<double> sigma;
  std::optional<double> r0;
  std::optional<std::vector<double>> circumferences;
  std::optional<double> mu_max;
  std::optional<double> rmax;
  std::optional<std::size_t> n;
  Params params;
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string out_dir = "cuspwave-out";
  bool operator==(const RunConfig&) const = default;
};

class ConfigError : public PreconditionError {
 public:
  ConfigError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

RunConfig parse_config(const std::string& text);
std::string serialize(const RunConfig& config);
ExperimentContext make_context(const RunConfig& config);

}  // namespace cuspwave
