// Acceptance criteria 1-13: one PASS/FAIL line each.
// Usage: acceptance [criterion ...]   (no arguments runs all of them)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "cuspwave/experiments.hpp"
#include "cuspwave/report.hpp"

using namespace cuspwave;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::string experiment;
  double budget_seconds;
  // names of the tolerances that decide the criterion; empty means every tolerance of every report
  std::vector<std::string> only;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {1, "exact-oracle equivalence", "schrodinger_failure_exact", 60, {"oracle_sup_error"}},
      {2, "Sobolev failure rate", "sobolev_failure", 120, {}},
      {3, "wave counterexample rate", "wave_failure", 180, {}},
      {4, "Schrodinger sharpness", "sharpness", 600, {}},
      {5, "semiclassical upper bound", "schrodinger_semiclassical", 600, {"max_over_min_R"}},
      {6, "wave Strichartz boundedness", "wave_strichartz", 600, {"max_over_min_R"}},
      {7, "dispersion decay", "dispersion", 300, {}},
      {8, "phase convexity", "phase_convexity", 120, {}},
      {9, "principal-symbol accuracy", "principal_symbol", 300, {}},
      {10, "finite propagation speed", "finite_speed", 300, {}},
      {11, "Littlewood-Paley", "littlewood_paley", 180, {}},
      {12, "elliptic weights and rough Sobolev", "elliptic_weights", 180, {}},
      {13, "invariant suite", "invariants", 120, {}},
  };
  return c;
}

bool decides(const Criterion& c, const std::string& name) {
  if (c.only.empty()) return true;
  for (const auto& n : c.only) {
    if (n == name) return true;
  }
  return false;
}

bool run(const Criterion& c, int jobs) {
  ExperimentContext ctx;
  ctx.jobs = jobs;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ExperimentReport> reports;
  std::string error;
  try {
    reports = run_experiment(c.experiment, ctx);
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool ok = error.empty() && !reports.empty();
  std::vector<std::string> detail;
  for (const auto& r : reports) {
    bool any = false;
    for (const auto& t : r.tolerances) {
      if (!decides(c, t.name)) continue;
      any = true;
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s %s.%s = %.6g in [%.6g, %.6g]", t.passed() ? "ok  " : "MISS", r.name.c_str(),
                    t.name.c_str(), t.value, t.lo, t.hi);
      detail.emplace_back(buf);
      ok = ok && t.passed();
    }
    if (c.only.empty()) {
      // every tolerance passed is not enough when a required fit is too poor to trust
      ok = ok && r.verdict == Verdict::Pass;
      detail.push_back("     " + r.name + " verdict " + to_string(r.verdict));
      for (const auto& f : r.fits) {
        if (!f.required || f.r_squared >= 0.9) continue;
        char buf[256];
        std::snprintf(buf, sizeof buf, "LOW  fit '%s' r^2 = %.3f (< 0.9), slope %.4g", f.label.c_str(), f.r_squared, f.slope);
        detail.emplace_back(buf);
      }
    }
    if (!any && !c.only.empty()) ok = false;
  }
  const bool in_budget = secs <= c.budget_seconds;
  ok = ok && in_budget;
  std::printf("%s criterion %d (%s): %s, %.1f s of %.0f s budget\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
              c.experiment.c_str(), secs, c.budget_seconds);
  if (!error.empty()) std::printf("     error: %s\n", error.c_str());
  for (const auto& d : detail) std::printf("     %s\n", d.c_str());
  if (!in_budget) std::printf("     over the runtime budget\n");
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) {
    for (const auto& c : criteria()) ids.push_back(c.id);
  }
  const int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool all = true;
  for (int id : ids) {
    bool found = false;
    for (const auto& c : criteria()) {
      if (c.id == id) {
        found = true;
        all = run(c, jobs) && all;
      }
    }
    if (!found) {
      std::printf("FAIL criterion %d: no such criterion\n", id);
      all = false;
    }
  }
  return all ? 0 : 1;
}
