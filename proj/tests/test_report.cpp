#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cuspwave/errors.hpp"
#include "cuspwave/report.hpp"

using namespace cuspwave;
using doctest::Approx;

TEST_CASE("power-law fits") {
  std::vector<std::pair<double, double>> xy;
  for (double x : {1.0, 2.0, 3.0, 5.0, 8.0}) xy.emplace_back(x, 3 * x * x);
  auto f = fit_power_law(xy);
  CHECK(f.slope == Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r_squared == Approx(1.0));

  xy.clear();
  for (double x : {1.0, 2.0, 4.0, 8.0}) xy.emplace_back(x, 7.0);
  CHECK(std::fabs(fit_power_law(xy).slope) < 1e-14);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  xy.clear();
  for (int k = 0; k < 12; ++k) {
    const double x = std::ldexp(1.0, -k);
    xy.emplace_back(x, std::pow(x, -0.375) * (1 + 0.01 * u(rng)));
  }
  CHECK(fit_power_law(xy).slope == Approx(-0.375).epsilon(0.01 / 0.375));

  CHECK_THROWS_AS(fit_power_law({{1, 1}, {2, 2}, {3, 3}}), PreconditionError);
  CHECK_THROWS_AS(fit_power_law({{1, 1}, {1, 2}, {3, 3}, {4, 4}}), PreconditionError);
  CHECK_THROWS_AS(fit_power_law({{1, 1}, {2, -2}, {3, 3}, {4, 4}}), DomainError);
  CHECK_THROWS_AS(fit_power_law({{0, 1}, {2, 2}, {3, 3}, {4, 4}}), DomainError);
}

namespace {

ExperimentReport sample_report() {
  ExperimentReport r;
  r.name = "demo";
  r.parameters = {{"h_list", {0.5, 0.25, 0.125, 0.0625}}, {"q", {4}}};
  r.settings = {{"profile", "exp r0=0"}, {"note", "quote \" and, comma"}};
  auto& t = r.table("main", {"h", "value"});
  t.add({0.5, 1.0 / 3.0});
  t.add({0.25, std::numeric_limits<double>::infinity()});
  auto& t2 = r.table("other", {"k", "x", "y"});
  t2.add({1, 2, 3});
  r.add_fit("fit", {{1, 2}, {2, 4}, {3, 6}, {4, 8.0001}});
  r.check("slope", 1.0, 0.9, 1.1);
  r.notes.push_back("line one");
  r.seconds = 1.25;
  r.finalize();
  return r;
}

}  // namespace

TEST_CASE("verdict rules") {
  auto r = sample_report();
  CHECK(r.verdict == Verdict::Pass);
  r.check("bad", 5.0, 0.0, 1.0);
  r.finalize();
  CHECK(r.verdict == Verdict::Fail);
  ExperimentReport q;
  q.add_fit("noisy", {{1, 1}, {2, 8}, {3, 1}, {4, 9}, {5, 1}});
  q.check("ok", 0.0, 0.0, 0.0);
  q.finalize();
  CHECK(q.verdict == Verdict::Inconclusive);
  ExperimentReport q2;
  q2.add_fit("noisy", {{1, 1}, {2, 8}, {3, 1}, {4, 9}, {5, 1}}, false);
  q2.check("ok", 0.0, 0.0, 0.0);
  q2.finalize();
  CHECK(q2.verdict == Verdict::Pass);
  CHECK(verdict_from_string(to_string(Verdict::Inconclusive)) == Verdict::Inconclusive);
  CHECK(r.tolerance("bad") != nullptr);
  CHECK(r.tolerance("missing") == nullptr);
}

TEST_CASE("json round trip") {
  auto r = sample_report();
  const std::string js = to_json(r);
  CHECK(js.find("\"measurements\"") != std::string::npos);
  CHECK(js.find("\"verdict\"") != std::string::npos);
  auto back = report_from_json(js);
  CHECK(back == r);
  CHECK(to_json(back) == js);
}

TEST_CASE("csv layout") {
  const std::string csv = to_csv(sample_report());
  const std::string header = csv.substr(0, csv.find("\r\n"));
  CHECK(header == "table,h,value,k,x,y");
  CHECK(csv.find("main,0.5,0.33333333333333331,,,\r\n") != std::string::npos);
  CHECK(csv.find("main,0.25,inf,,,\r\n") != std::string::npos);
  CHECK(csv.find("other,,,1,2,3\r\n") != std::string::npos);
  CHECK(to_csv(sample_report()) == csv);
}
