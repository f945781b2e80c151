// cuspwave command line: run experiments from a config file, list the catalog.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cuspwave/config.hpp"
#include "cuspwave/experiments.hpp"
#include "cuspwave/report.hpp"

namespace fs = std::filesystem;
using namespace cuspwave;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for '" + path.string() + "'");
}

int exit_code(const std::vector<ExperimentReport>& reports) {
  bool fail = false, inconclusive = false;
  for (const auto& r : reports) {
    fail |= r.verdict == Verdict::Fail;
    inconclusive |= r.verdict == Verdict::Inconclusive;
  }
  if (fail) return 2;
  if (inconclusive) return 3;
  return 0;
}

int do_list() {
  for (const auto& e : catalog()) {
    std::cout << e.name << "\n    " << e.description << "\n";
  }
  std::cout << "suite\n    every experiment above, in order\n";
  return 0;
}

struct RunArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 0;
  bool dry_run = false;
};

int do_run(const RunArgs& a, const CLI::App& sub) {
  RunConfig cfg;
  try {
    cfg = parse_config(slurp(a.config));
  } catch (const std::exception& e) {
    std::cerr << "cuspwave: " << e.what() << "\n";
    return 1;
  }
  if (sub.count("--out")) cfg.out_dir = a.out;
  if (sub.count("--seed")) cfg.seed = a.seed;
  if (sub.count("--jobs")) cfg.jobs = a.jobs;
  if (a.dry_run) {
    std::cout << serialize(cfg);
    return 0;
  }
  std::vector<ExperimentReport> reports;
  try {
    reports = run_experiment(cfg.experiment, make_context(cfg));
  } catch (const std::exception& e) {
    std::cerr << "cuspwave: " << cfg.experiment << ": " << e.what() << "\n";
    return 1;
  }
  try {
    fs::create_directories(cfg.out_dir);
    for (const auto& r : reports) {
      write_file(fs::path(cfg.out_dir) / (r.name + ".csv"), to_csv(r));
      write_file(fs::path(cfg.out_dir) / (r.name + ".json"), to_json(r));
    }
  } catch (const std::exception& e) {
    std::cerr << "cuspwave: " << e.what() << "\n";
    return 1;
  }
  for (const auto& r : reports) {
    std::printf("%-34s %-12s %8.2fs\n", r.name.c_str(), to_string(r.verdict).c_str(), r.seconds);
    for (const auto& t : r.tolerances) {
      if (!t.passed()) std::printf("    %s = %.6g outside [%.6g, %.6g]\n", t.name.c_str(), t.value, t.lo, t.hi);
    }
  }
  return exit_code(reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cuspwave: Strichartz experiments on cusp surfaces"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "run an experiment (or the suite) described by a config file");
  run->add_option("--config", ra.config, "config file")->required();
  run->add_option("--out", ra.out, "output directory (overrides out_dir)");
  run->add_option("--seed", ra.seed, "random seed (overrides seed)");
  run->add_option("--jobs", ra.jobs, "worker threads (overrides jobs)")->check(CLI::Range(1, 1024));
  run->add_flag("--dry-run", ra.dry_run, "print the resolved config and exit");

  auto* list = app.add_subcommand("list", "print the experiment catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (*list) return do_list();
  return do_run(ra, *run);
}
