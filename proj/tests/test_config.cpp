#include <doctest.h>

#include <string>

#include "cuspwave/config.hpp"

using namespace cuspwave;

TEST_CASE("minimal config gets defaults") {
  auto c = parse_config("experiment = sharpness\n");
  CHECK(c.experiment == "sharpness");
  CHECK(c.seed == 42);
  CHECK(c.jobs == 1);
  CHECK_FALSE(c.kind.has_value());
}

TEST_CASE("full config") {
  auto c = parse_config(
      "# comment line\n"
      "experiment = sobolev_failure   # trailing comment\n"
      "seed = 7\n"
      "jobs = 2\n"
      "geometry.kind = power\n"
      "geometry.sigma = 2.5\n"
      "geometry.r0 = 1\n"
      "angular.circumferences = [6.283185307179586, 3]\n"
      "angular.mu_max = 4\n"
      "radial.rmax = 30\n"
      "radial.n = 1000\n"
      "param.q = 6\n"
      "param.n_list = [6, 8, 10, 12]\n");
  CHECK(c.kind == WarpKind::Power);
  CHECK(*c.sigma == 2.5);
  CHECK(c.circumferences->size() == 2);
  CHECK(*c.n == 1000);
  CHECK(c.params.at("n_list").size() == 4);
  auto ctx = make_context(c);
  CHECK(ctx.profile->kind() == WarpKind::Power);
  CHECK(ctx.manifold.k0() == 2);
  CHECK(ctx.get("q", 0) == 6);
  CHECK(parse_config(serialize(c)) == c);
}

TEST_CASE("round trip keeps one-element lists") {
  auto c = parse_config("experiment = dispersion\nparam.wave_mu_list = [2]\nparam.wave_h = 0.001\n");
  const std::string s = serialize(c);
  CHECK(s.find("param.wave_mu_list = [2]") != std::string::npos);
  CHECK(parse_config(s) == c);
}

TEST_CASE("config errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("experiment = sharpness\ngeometry.kind = power\n") == 2);
  CHECK(line_of("experiment = sharpness\nbogus = 1\n") == 2);
  CHECK(line_of("experiment = sharpness\nseed = abc\n") == 2);
  CHECK(line_of("experiment = sharpness\nseed = 1\nseed = 2\n") == 3);
  CHECK(line_of("experiment = nope\n") == 1);
  CHECK(line_of("seed = 1\n") == 0);
  CHECK(line_of("experiment = sharpness\ngeometry.kind = exp\ngeometry.sigma = 2\n") == 2);
  CHECK(line_of("experiment = sharpness\nparam.not_a_knob = 1\n") == 2);
  CHECK(line_of("experiment = sharpness\nradial.rmax = [1, 2]\n") == 2);
  CHECK(line_of("experiment = sharpness\njobs = 0\n") == 2);
  CHECK(line_of("experiment = suite\nparam.q = 4\n") == -1);
  try {
    parse_config("experiment = nope\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("sharpness") != std::string::npos);
  }
}
