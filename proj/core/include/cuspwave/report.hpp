#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cuspwave {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct ScalingFit {
  std::string label;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log x, log y)
  bool required = true;  // a poor fit on a required regression makes the verdict Inconclusive
  bool operator==(const ScalingFit&) const = default;
};

// Least squares on (log x, log y). Needs >= 4 points with distinct positive x and positive y.
ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& xy);

// value must lie in [lo, hi]; either bound may be infinite.
struct Tolerance {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool passed() const { return value >= lo && value <= hi; }
  bool operator==(const Tolerance&) const = default;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  void add(std::vector<double> row);
  bool operator==(const Table&) const = default;
};

using Params = std::map<std::string, std::vector<double>>;

struct ExperimentReport {
  std::string name;
  Params parameters;
  std::map<std::string, std::string> settings;  // non-numeric parameters (profile, flow kind, ...)
  std::vector<Table> tables;
  std::vector<ScalingFit> fits;
  std::vector<Tolerance> tolerances;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::Inconclusive;
  double seconds = 0.0;

  Table& table(const std::string& name, std::vector<std::string> columns);
  ScalingFit& add_fit(std::string label, const std::vector<std::pair<double, double>>& xy, bool required = true);
  const Tolerance& check(std::string name, double value, double lo, double hi);
  const Tolerance* tolerance(const std::string& name) const;
  // Inconclusive if a required fit has r^2 < 0.9, else Pass iff every tolerance holds.
  void finalize();
  bool operator==(const ExperimentReport&) const = default;
};

std::string to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);
// One wide table: first column names the table, remaining columns are the union of all table headers.
std::string to_csv(const ExperimentReport& report);

}  // namespace cuspwave
