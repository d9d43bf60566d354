// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <string>

#include "pmusim/error.hpp"
#include "pmusim/scenario.hpp"

using namespace pmusim;

namespace {

ConfigError parse_error(const std::string &text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError &e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("unreachable");
}

// Replaces the first line starting with `prefix` by `line`.
std::string edit(std::string text, const std::string &prefix, const std::string &line) {
  const auto at = text.find("\n" + prefix);
  REQUIRE(at != std::string::npos);
  const auto end = text.find('\n', at + 1);
  return text.replace(at + 1, end - at - 1, line);
}

std::size_t line_of(const std::string &text, const std::string &needle) {
  const auto at = text.find(needle);
  REQUIRE(at != std::string::npos);
  std::size_t n = 1;
  for (std::size_t k = 0; k < at; ++k)
    n += text[k] == '\n';
  return n;
}

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("serialization round trip") {
  for (const Scenario &sc :
       {defaults::low(), defaults::medium(), defaults::high(), defaults::suite(), defaults::mixed()}) {
    const std::string text = serialize_scenario(sc);
    const Scenario back = parse_scenario(text);
    CHECK(back == sc);
    CHECK(serialize_scenario(back) == text);
  }
}

TEST_CASE("non-default fields survive a round trip") {
  Scenario sc = defaults::medium();
  sc.controller.energy_threshold = {-0.5, false};
  sc.controller.neighborhood = Neighborhood::VonNeumann4;
  sc.controller.settle_time_s = 0.1;
  sc.mode = RunMode::fixed_at({3, 7});
  sc.dt_s = 5e-4;
  sc.max_ticks = 1234;
  sc.run_app = "corner_filtered";
  sc.apps[1].required_throughput = 0.9;
  CHECK(parse_scenario(serialize_scenario(sc)) == sc);
}

TEST_CASE("bundled scenario files match the built-in defaults") {
  const std::filesystem::path dir = PMUSIM_SCENARIO_DIR;
  CHECK(load_scenario(dir / "low.scn") == defaults::low());
  CHECK(load_scenario(dir / "medium.scn") == defaults::medium());
  CHECK(load_scenario(dir / "high.scn") == defaults::high());
  CHECK(load_scenario(dir / "suite.scn") == defaults::suite());
  CHECK(load_scenario(dir / "mixed.scn") == defaults::mixed());
}

TEST_CASE("default scenario contents") {
  const Scenario mixed = defaults::mixed();
  REQUIRE(mixed.environments.size() == 1);
  const auto &segs = mixed.environments[0].segments;
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].entropy > segs[1].entropy);
  CHECK(segs[1].entropy > segs[2].entropy);
  const Scenario suite = defaults::suite();
  CHECK(suite.environments.size() == 3);
  CHECK(suite.apps.size() == 3);
  CHECK(defaults::medium().sim_config().environment.segments[0].entropy ==
        defaults::medium_entropy());
}

TEST_CASE("diagnostics carry line and key") {
  const std::string good = serialize_scenario(defaults::medium());

  SUBCASE("unknown key") {
    const std::string text = edit(good, "p_idle_w", "bogus = 1");
    const auto e = parse_error(text);
    CHECK(e.key() == "bogus");
    CHECK(e.line() == line_of(text, "bogus"));
  }
  SUBCASE("bad number") {
    const std::string text = edit(good, "c_lin_w_per_mps", "c_lin_w_per_mps = fast");
    const auto e = parse_error(text);
    CHECK(e.key() == "c_lin_w_per_mps");
    CHECK(e.line() == line_of(text, "= fast"));
    CHECK(std::string(e.what()).find("fast") != std::string::npos);
  }
  SUBCASE("non-finite number") {
    const auto e = parse_error(edit(good, "settle_time_s", "settle_time_s = nan"));
    CHECK(e.key() == "settle_time_s");
  }
  SUBCASE("duplicate key") {
    const std::string text = edit(good, "c_lin_w_per_mps", "p_idle_w = 2");
    const auto e = parse_error(text);
    CHECK(e.key() == "p_idle_w");
    CHECK(e.line() == line_of(text, "p_idle_w = 2"));
  }
  SUBCASE("unknown section") {
    const std::string text = edit(good, "[motor]", "[engine]");
    CHECK(parse_error(text).line() == line_of(text, "[engine]"));
  }
  SUBCASE("missing required key") {
    const auto e = parse_error(edit(good, "effective_ipc", "# removed"));
    CHECK(e.key() == "effective_ipc");
  }
  SUBCASE("domain violation inside a section") {
    const auto e = parse_error(edit(good, "idle_utilization_floor", "idle_utilization_floor = 2"));
    CHECK(e.line() > 0);
  }
  SUBCASE("decreasing DVFS table") {
    const auto e = parse_error(edit(good, "level = 3e+08", "level = 3e+10 0.6"));
    CHECK(e.line() > 0);
  }
  SUBCASE("wrong arity") {
    const std::string text = edit(good, "segment", "segment = 100");
    const auto e = parse_error(text);
    CHECK(e.key() == "segment");
    CHECK(e.line() == line_of(text, "segment = 100\n"));
  }
  SUBCASE("missing format") {
    CHECK_THROWS_AS(parse_scenario("name = x\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(edit(good, "format", "format = pmusim-scenario/9")),
                    ConfigError);
  }
  SUBCASE("bad mode") {
    const auto e = parse_error(edit(good, "mode", "mode = turbo"));
    CHECK(std::string(e.what()).find("turbo") != std::string::npos);
  }
  SUBCASE("unknown app selection") {
    const auto e = parse_error(good + "app = nope\n");
    CHECK(std::string(e.what()).find("nope") != std::string::npos);
  }
}

TEST_CASE("missing file") {
  try {
    load_scenario("/nonexistent/x.scn");
    FAIL("expected a ConfigError");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("/nonexistent/x.scn") != std::string::npos);
  }
}

TEST_CASE("mode parsing") {
  const GridShape g{12, 10};
  CHECK(parse_mode("controlled", g) == RunMode::controlled());
  CHECK(parse_mode("hs", g) == RunMode::fixed_at({11, 9}));
  CHECK(parse_mode("as", g) == RunMode::fixed_at({11, 5}));
  CHECK(parse_mode("as-star", g) == RunMode::fixed_at({6, 5}));
  CHECK(parse_mode("fixed:3,4", g) == RunMode::fixed_at({3, 4}));
  CHECK_THROWS_AS(parse_mode("fixed:12,0", g), ConfigError);
  CHECK_THROWS_AS(parse_mode("fixed:1", g), ConfigError);
  CHECK_THROWS_AS(parse_mode("fixed:-1,2", g), ConfigError);
  CHECK_THROWS_AS(parse_mode("", g), ConfigError);
  CHECK(format_mode(RunMode::fixed_at({3, 4})) == "fixed:3,4");
  CHECK(format_mode(RunMode::controlled()) == "controlled");
}

} // TEST_SUITE
