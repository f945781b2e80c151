#include "cuspwave/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cuspwave/errors.hpp"
#include "json.hpp"

namespace cuspwave {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "Pass";
    case Verdict::Fail:
      return "Fail";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "Pass") return Verdict::Pass;
  if (s == "Fail") return Verdict::Fail;
  if (s == "Inconclusive") return Verdict::Inconclusive;
  throw PreconditionError("unknown verdict '" + s + "'");
}

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw PreconditionError("table '" + name + "': row width does not match header");
  rows.push_back(std::move(row));
}

Table& ExperimentReport::table(const std::string& tname, std::vector<std::string> columns) {
  for (auto& t : tables) {
    if (t.name == tname) return t;
  }
  tables.push_back(Table{tname, std::move(columns), {}});
  return tables.back();
}

ScalingFit& ExperimentReport::add_fit(std::string label, const std::vector<std::pair<double, double>>& xy,
                                      bool required) {
  ScalingFit f = fit_power_law(xy);
  f.label = std::move(label);
  f.required = required;
  fits.push_back(std::move(f));
  return fits.back();
}

const Tolerance& ExperimentReport::check(std::string tname, double value, double lo, double hi) {
  tolerances.push_back(Tolerance{std::move(tname), value, lo, hi});
  return tolerances.back();
}

const Tolerance* ExperimentReport::tolerance(const std::string& tname) const {
  for (const auto& t : tolerances) {
    if (t.name == tname) return &t;
  }
  return nullptr;
}

void ExperimentReport::finalize() {
  for (const auto& f : fits) {
    if (f.required && f.r_squared < 0.9) {
      verdict = Verdict::Inconclusive;
      return;
    }
  }
  verdict = Verdict::Pass;
  for (const auto& t : tolerances) {
    if (!t.passed()) verdict = Verdict::Fail;
  }
}

// ---- JSON -------------------------------------------------------------

namespace {

// JSON has no infinities; those travel as strings.
json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double num(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  if (s == "nan") return std::nan("");
  throw PreconditionError("report JSON: bad number '" + s + "'");
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> nums(const json& a) {
  std::vector<double> v;
  for (const auto& x : a) v.push_back(num(x));
  return v;
}

}  // namespace

std::string to_json(const ExperimentReport& r) {
  json j;
  j["name"] = r.name;
  j["verdict"] = to_string(r.verdict);
  j["seconds"] = num(r.seconds);
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = nums(v);
  j["parameters"] = params;
  j["settings"] = r.settings;
  json tables = json::array();
  for (const auto& t : r.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) rows.push_back(nums(row));
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  j["measurements"] = tables;
  json fits = json::array();
  for (const auto& f : r.fits) {
    json pts = json::array();
    for (const auto& [x, y] : f.points) pts.push_back({num(x), num(y)});
    fits.push_back({{"label", f.label},
                    {"slope", num(f.slope)},
                    {"intercept", num(f.intercept)},
                    {"r_squared", num(f.r_squared)},
                    {"required", f.required},
                    {"points", pts}});
  }
  j["fits"] = fits;
  json tol = json::array();
  for (const auto& t : r.tolerances) {
    tol.push_back({{"name", t.name}, {"value", num(t.value)}, {"lo", num(t.lo)}, {"hi", num(t.hi)}, {"passed", t.passed()}});
  }
  j["tolerances"] = tol;
  j["notes"] = r.notes;
  return j.dump(2);
}

ExperimentReport report_from_json(const std::string& text) {
  ExperimentReport r;
  try {
    const json j = json::parse(text);
    r.name = j.at("name").get<std::string>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.seconds = num(j.at("seconds"));
    for (const auto& [k, v] : j.at("parameters").items()) r.parameters[k] = nums(v);
    r.settings = j.at("settings").get<std::map<std::string, std::string>>();
    for (const auto& t : j.at("measurements")) {
      Table tab{t.at("name").get<std::string>(), t.at("columns").get<std::vector<std::string>>(), {}};
      for (const auto& row : t.at("rows")) tab.rows.push_back(nums(row));
      r.tables.push_back(std::move(tab));
    }
    for (const auto& f : j.at("fits")) {
      ScalingFit s;
      s.label = f.at("label").get<std::string>();
      s.slope = num(f.at("slope"));
      s.intercept = num(f.at("intercept"));
      s.r_squared = num(f.at("r_squared"));
      s.required = f.at("required").get<bool>();
      for (const auto& p : f.at("points")) s.points.emplace_back(num(p.at(0)), num(p.at(1)));
      r.fits.push_back(std::move(s));
    }
    for (const auto& t : j.at("tolerances")) {
      r.tolerances.push_back(
          Tolerance{t.at("name").get<std::string>(), num(t.at("value")), num(t.at("lo")), num(t.at("hi"))});
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("report JSON: ") + e.what());
  }
  return r;
}

// ---- CSV --------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string to_csv(const ExperimentReport& r) {
  std::vector<std::string> header;
  for (const auto& t : r.tables) {
    for (const auto& c : t.columns) {
      if (std::find(header.begin(), header.end(), c) == header.end()) header.push_back(c);
    }
  }
  std::ostringstream os;
  os << "table";
  for (const auto& c : header) os << ',' << csv_field(c);
  os << "\r\n";
  for (const auto& t : r.tables) {
    std::vector<int> where(header.size(), -1);
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      where[static_cast<std::size_t>(std::find(header.begin(), header.end(), t.columns[i]) - header.begin())] =
          static_cast<int>(i);
    }
    for (const auto& row : t.rows) {
      os << csv_field(t.name);
      for (int w : where) {
        os << ',';
        if (w >= 0) os << fmt(row[static_cast<std::size_t>(w)]);
      }
      os << "\r\n";
    }
  }
  return os.str();
}

}  // namespace cuspwave
