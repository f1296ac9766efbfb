#include <cstdlib>

#include "doctest.h"
#include "hyperwalk/config.hpp"
#include "hyperwalk/output.hpp"

using namespace hyperwalk;

TEST_CASE("defaults resolve without a file") {
  const auto c = resolve_config({});
  CHECK(c.backend == "free:2");
  CHECK(c.params.replicas == 200);
  CHECK(c.params.horizon == 2000);
  CHECK(c.params.entropy_steps == 30);
  CHECK(c.params.model.p == 1.0);
  CHECK(c.resolved.size() == config_defaults().size());
}

TEST_CASE("key = value parsing with comments") {
  const auto v = parse_config_text("# run\nbackend = fuchsian:5,8  # tiling\np=0.9\n\nseed = 42\n");
  CHECK(v.at("backend") == "fuchsian:5,8");
  const auto c = resolve_config(v);
  CHECK(c.params.seed == 42);
  CHECK(c.params.model.p == 0.9);
}

TEST_CASE("unknown and duplicate keys are rejected with line numbers") {
  try {
    parse_config_text("replicas = 10\nreplica = 20\nreplicas = 30\n", "run.cfg");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    REQUIRE(e.problems().size() == 2);
    CHECK(e.problems()[0] == "run.cfg:2: unknown key 'replica'");
    CHECK(e.problems()[1] == "run.cfg:3: duplicate key 'replicas'");
  }
}

TEST_CASE("every bad field is reported") {
  try {
    resolve_config({{"p", "1.5"}, {"replicas", "ten"}, {"backend", "fuchsian:4,4"},
                    {"grid_min", "3"}, {"grid_max", "4"}});
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() == 4);
  }
}

TEST_CASE("environment overrides are namespaced") {
  ::setenv("HYPERWALK_REPLICAS", "77", 1);
  ConfigValues v;
  apply_environment_overrides(v);
  ::unsetenv("HYPERWALK_REPLICAS");
  CHECK(v.at("replicas") == "77");
  CHECK(resolve_config(v).params.replicas == 77);
}

TEST_CASE("manifest round trip reproduces the resolved config") {
  const auto c = resolve_config({{"p", "0.9"}, {"seed", "5"}});
  const auto m = make_manifest("estimate-speed", c, {"speed.csv"}, 0);
  std::string sub;
  const auto back = resolve_config(config_from_manifest(m, &sub));
  CHECK(sub == "estimate-speed");
  CHECK(back.resolved == c.resolved);
  CHECK(m.dump() == make_manifest("estimate-speed", back, {"speed.csv"}, 0).dump());
}

TEST_CASE("csv and svg outputs") {
  EstimateReport r;
  r.values = {0.5, 0.25};
  CHECK(values_csv(r) == "replica,value\n0,0.5\n1,0.25\n");
  CHECK(format_double(0.1) == "0.1");
  PlotSeries s{"delta", {1, 2, 3}, {0.9, 0.8, 0.75}, {0.01, 0.02, 0.03}};
  const auto svg = svg_plot("t", "x", "y", {s});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}
