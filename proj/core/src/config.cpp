#include "cuspwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

namespace cuspwave {

ConfigError::ConfigError(int line, const std::string& what)
    : PreconditionError(line > 0 ? "config line " + std::to_string(line) + ": " + what : "config: " + what), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& s, int line, const std::string& key) {
  double v = 0.0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(line, "'" + key + "' expects a number, got '" + t + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& s, int line, const std::string& key) {
  const auto t = trim(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw ConfigError(line, "'" + key + "' expects a list [a, b, ...]");
  std::vector<double> out;
  const std::string body = trim(t.substr(1, t.size() - 2));
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, line, key));
  return out;
}

std::vector<double> parse_value(const std::string& s, int line, const std::string& key) {
  const auto t = trim(s);
  if (!t.empty() && t.front() == '[') return parse_list(t, line, key);
  return {parse_number(t, line, key)};
}

std::uint64_t parse_u64(const std::string& s, int line, const std::string& key) {
  std::uint64_t v = 0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(line, "'" + key + "' expects an unsigned integer, got '" + t + "'");
  }
  return v;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(const std::vector<double>& v, bool force_list) {
  if (v.size() == 1 && !force_list) return fmt(v.front());
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

std::string valid_names() {
  std::string s;
  for (const auto& n : experiment_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::vector<std::pair<std::string, int>> param_lines;
  int geometry_line = 0;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool have_experiment = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (val.empty()) throw ConfigError(line, "'" + key + "' has no value");
    if (!seen.insert(key).second) throw ConfigError(line, "duplicate key '" + key + "'");

    if (key == "experiment") {
      cfg.experiment = val;
      have_experiment = true;
      if (!find_experiment(val) && val != "suite") {
        throw ConfigError(line, "unknown experiment '" + val + "'; valid names: " + valid_names());
      }
    } else if (key == "seed") {
      cfg.seed = parse_u64(val, line, key);
    } else if (key == "jobs") {
      const auto j = parse_u64(val, line, key);
      if (j < 1 || j > 1024) throw ConfigError(line, "'jobs' must lie in [1, 1024]");
      cfg.jobs = static_cast<int>(j);
    } else if (key == "out_dir") {
      cfg.out_dir = val;
    } else if (key == "geometry.kind") {
      try {
        cfg.kind = warp_kind_from_string(val);
      } catch (const std::exception&) {
        throw ConfigError(line, "'geometry.kind' must be exp, cosh or power, got '" + val + "'");
      }
      geometry_line = line;
    } else if (key == "geometry.sigma") {
      cfg.sigma = parse_number(val, line, key);
    } else if (key == "geometry.r0") {
      cfg.r0 = parse_number(val, line, key);
    } else if (key == "angular.circumferences") {
      cfg.circumferences = parse_list(val, line, key);
      if (cfg.circumferences->empty()) throw ConfigError(line, "'angular.circumferences' must not be empty");
      for (double l : *cfg.circumferences) {
        if (!(l > 0.0)) throw ConfigError(line, "circumferences must be positive");
      }
    } else if (key == "angular.mu_max") {
      cfg.mu_max = parse_number(val, line, key);
      if (!(*cfg.mu_max >= 0.0)) throw ConfigError(line, "'angular.mu_max' must be >= 0");
    } else if (key == "radial.rmax") {
      cfg.rmax = parse_number(val, line, key);
    } else if (key == "radial.n") {
      const auto n = parse_u64(val, line, key);
      if (n < 16) throw ConfigError(line, "'radial.n' must be >= 16");
      cfg.n = static_cast<std::size_t>(n);
    } else if (key.rfind("param.", 0) == 0 && key.size() > 6) {
      const std::string name = key.substr(6);
      cfg.params[name] = parse_value(val, line, key);
      param_lines.emplace_back(name, line);
    } else {
      throw ConfigError(line, "unknown key '" + key + "'");
    }
  }
  if (!have_experiment) throw ConfigError(0, "missing required key 'experiment'");
  if (cfg.kind) {
    if (*cfg.kind == WarpKind::Power && !cfg.sigma) throw ConfigError(geometry_line, "geometry.kind = power requires geometry.sigma");
    if (*cfg.kind != WarpKind::Power && cfg.sigma) throw ConfigError(geometry_line, "geometry.sigma only applies to power");
    try {
      WarpProfile::make(*cfg.kind, cfg.sigma.value_or(0.0), cfg.r0.value_or(*cfg.kind == WarpKind::Power ? 1.0 : 0.0));
    } catch (const std::exception& e) {
      throw ConfigError(geometry_line, e.what());
    }
  } else if (cfg.sigma || cfg.r0) {
    throw ConfigError(0, "geometry.sigma / geometry.r0 given without geometry.kind");
  }
  // overrides must name a knob of the chosen experiment (any experiment for the suite)
  for (const auto& [name, ln] : param_lines) {
    bool known = false;
    for (const auto& info : catalog()) {
      if ((cfg.experiment == "suite" || info.name == cfg.experiment) && info.defaults.count(name)) known = true;
    }
    if (!known) throw ConfigError(ln, "unknown parameter '" + name + "' for experiment '" + cfg.experiment + "'");
  }
  return cfg;
}

std::string serialize(const RunConfig& cfg) {
  std::ostringstream os;
  os << "experiment = " << cfg.experiment << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "jobs = " << cfg.jobs << "\n";
  os << "out_dir = " << cfg.out_dir << "\n";
  if (cfg.kind) os << "geometry.kind = " << to_string(*cfg.kind) << "\n";
  if (cfg.sigma) os << "geometry.sigma = " << fmt(*cfg.sigma) << "\n";
  if (cfg.r0) os << "geometry.r0 = " << fmt(*cfg.r0) << "\n";
  if (cfg.circumferences) os << "angular.circumferences = " << fmt(*cfg.circumferences, true) << "\n";
  if (cfg.mu_max) os << "angular.mu_max = " << fmt(*cfg.mu_max) << "\n";
  if (cfg.rmax) os << "radial.rmax = " << fmt(*cfg.rmax) << "\n";
  if (cfg.n) os << "radial.n = " << *cfg.n << "\n";
  for (const auto& [k, v] : cfg.params) {
    // a one-element list stays a list only if the knob is a list by default
    bool list_default = false;
    for (const auto& info : catalog()) {
      const auto it = info.defaults.find(k);
      if (it != info.defaults.end() && it->second.size() != 1) list_default = true;
    }
    os << "param." << k << " = " << fmt(v, list_default || v.size() != 1) << "\n";
  }
  return os.str();
}

ExperimentContext make_context(const RunConfig& cfg) {
  ExperimentContext ctx;
  if (cfg.kind) {
    ctx.profile = WarpProfile::make(*cfg.kind, cfg.sigma.value_or(0.0),
                                    cfg.r0.value_or(*cfg.kind == WarpKind::Power ? 1.0 : 0.0));
  }
  if (cfg.circumferences) ctx.manifold = AngularManifold{*cfg.circumferences};
  ctx.mu_max = cfg.mu_max;
  ctx.rmax = cfg.rmax;
  ctx.n = cfg.n;
  ctx.seed = cfg.seed;
  ctx.jobs = cfg.jobs;
  ctx.params = cfg.params;
  return ctx;
}

}  // namespace cuspwave
