// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pmusim/pmusim.h"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pmusim_capi_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const char *name) const { return (path / name).string(); }
};

pmusim_scenario *bundled(const char *name) {
  pmusim_scenario *sc = nullptr;
  REQUIRE(pmusim_scenario_default(name, &sc) == PMUSIM_OK);
  return sc;
}

} // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(pmusim_version()) > 0);
  CHECK(std::string(pmusim_status_name(PMUSIM_TIMEOUT)) == "timeout");
  CHECK(std::string(pmusim_status_name(PMUSIM_OK)) == "ok");
}

TEST_CASE("null handles are rejected") {
  pmusim_scenario *sc = nullptr;
  CHECK(pmusim_scenario_load(nullptr, &sc) == PMUSIM_INVALID_ARGUMENT);
  CHECK(pmusim_scenario_default("low", nullptr) == PMUSIM_INVALID_ARGUMENT);
  pmusim_mission *m = nullptr;
  CHECK(pmusim_mission_run(nullptr, &m) == PMUSIM_INVALID_ARGUMENT);
  CHECK(m == nullptr);
  CHECK(pmusim_grid_cells(nullptr) == 0);
  CHECK(pmusim_frontier_argmin(nullptr) == -1);
  // Freeing NULL is a no-op.
  pmusim_scenario_free(nullptr);
  pmusim_grid_free(nullptr);
  pmusim_frontier_free(nullptr);
  pmusim_mission_free(nullptr);
  pmusim_comparison_free(nullptr);
}

TEST_CASE("error codes and messages") {
  pmusim_scenario *sc = nullptr;
  CHECK(pmusim_scenario_load("/nonexistent.scn", &sc) == PMUSIM_IO);
  CHECK(std::string(pmusim_last_error()).find("/nonexistent.scn") != std::string::npos);
  CHECK(sc == nullptr);

  const std::string bad = "format = pmusim-scenario/1\n[motor]\nwheels = 4\n";
  CHECK(pmusim_scenario_parse(bad.data(), bad.size(), &sc) == PMUSIM_CONFIG);
  CHECK(std::string(pmusim_last_error()).find("line 3") != std::string::npos);

  CHECK(pmusim_scenario_default("nope", &sc) == PMUSIM_INVALID_ARGUMENT);

  sc = bundled("medium");
  CHECK(pmusim_scenario_set_dt(sc, 0.5) == PMUSIM_DOMAIN);
  CHECK(pmusim_scenario_set_mode(sc, "warp") == PMUSIM_CONFIG);
  CHECK(pmusim_scenario_select(sc, "nope", nullptr) == PMUSIM_CONFIG);
  const double negative = -1.0;
  pmusim_grid *g = nullptr;
  CHECK(pmusim_sweep(sc, &negative, &g) == PMUSIM_DOMAIN);
  CHECK(g == nullptr);
  pmusim_scenario_free(sc);
}

TEST_CASE("sweep, grid file and frontier") {
  TempDir tmp;
  pmusim_scenario *sc = bundled("high");
  REQUIRE(pmusim_scenario_select(sc, "corner", nullptr) == PMUSIM_OK);
  pmusim_grid *g = nullptr;
  REQUIRE(pmusim_sweep(sc, nullptr, &g) == PMUSIM_OK);
  CHECK(pmusim_grid_cells(g) == 120);
  REQUIRE(pmusim_grid_write_csv(g, tmp.file("grid.csv").c_str()) == PMUSIM_OK);
  REQUIRE(pmusim_grid_write_svg(g, tmp.file("grid.svg").c_str()) == PMUSIM_OK);

  pmusim_grid *g2 = nullptr;
  REQUIRE(pmusim_grid_load_csv(tmp.file("grid.csv").c_str(), &g2) == PMUSIM_OK);
  pmusim_frontier *a = nullptr, *b = nullptr;
  REQUIRE(pmusim_frontier_compute(g, &a) == PMUSIM_OK);
  REQUIRE(pmusim_frontier_compute(g2, &b) == PMUSIM_OK);
  // The fastest speeds cannot keep up with the event rate at any frequency.
  const std::size_t n = pmusim_frontier_size(a);
  CHECK(n > 2);
  CHECK(n < 10);
  CHECK(pmusim_frontier_size(b) == n);
  CHECK(pmusim_frontier_argmin(a) == pmusim_frontier_argmin(b));
  REQUIRE(pmusim_frontier_write_csv(a, tmp.file("a.csv").c_str()) == PMUSIM_OK);
  REQUIRE(pmusim_frontier_write_csv(b, tmp.file("b.csv").c_str()) == PMUSIM_OK);
  CHECK(slurp(tmp.path / "a.csv") == slurp(tmp.path / "b.csv"));

  double v = 0, f = 0, jpm = 0;
  CHECK(pmusim_frontier_point(a, 0, &v, &f, &jpm) == PMUSIM_OK);
  CHECK(v == 0.5);
  CHECK(pmusim_frontier_point(a, n, &v, &f, &jpm) == PMUSIM_INVALID_ARGUMENT);

  CHECK(pmusim_grid_write_csv(g, "/nonexistent/dir/grid.csv") == PMUSIM_IO);

  pmusim_frontier_free(a);
  pmusim_frontier_free(b);
  pmusim_grid_free(g2);
  pmusim_grid_free(g);
  pmusim_scenario_free(sc);
}

TEST_CASE("mission run and outputs") {
  TempDir tmp;
  pmusim_scenario *sc = bundled("low");
  pmusim_mission *m = nullptr;
  REQUIRE(pmusim_mission_run(sc, &m) == PMUSIM_OK);
  pmusim_energy_report r{};
  REQUIRE(pmusim_mission_report(m, &r) == PMUSIM_OK);
  CHECK(r.distance_m == 100.0);
  CHECK(r.e_total_j == doctest::Approx(r.e_motor_j + r.e_cpu_j));
  CHECK(pmusim_mission_trace_size(m) > 1000);
  CHECK(pmusim_mission_decision_count(m) > 0);
  CHECK(pmusim_mission_write_trace(m, tmp.file("trace.csv").c_str()) == PMUSIM_OK);
  CHECK(pmusim_mission_write_decisions(m, tmp.file("decisions.csv").c_str()) == PMUSIM_OK);
  CHECK(pmusim_mission_write_report(m, tmp.file("report.txt").c_str()) == PMUSIM_OK);
  CHECK(slurp(tmp.path / "report.txt").find("mode = controlled") != std::string::npos);
  pmusim_mission_free(m);

  // Same scenario under the HS baseline uses more energy per metre.
  REQUIRE(pmusim_scenario_set_mode(sc, "hs") == PMUSIM_OK);
  REQUIRE(pmusim_mission_run(sc, &m) == PMUSIM_OK);
  pmusim_energy_report hs{};
  REQUIRE(pmusim_mission_report(m, &hs) == PMUSIM_OK);
  CHECK(hs.j_per_m > r.j_per_m);
  CHECK(pmusim_mission_trace_size(m) == 20001);
  pmusim_mission_free(m);
  pmusim_scenario_free(sc);
}

TEST_CASE("timeout hands back the partial mission") {
  pmusim_scenario *sc = bundled("medium");
  TempDir tmp;
  REQUIRE(pmusim_scenario_write(sc, tmp.file("m.scn").c_str()) == PMUSIM_OK);
  pmusim_scenario_free(sc);
  std::string text = slurp(tmp.path / "m.scn");
  const auto at = text.find("max_ticks = 0");
  REQUIRE(at != std::string::npos);
  text.replace(at, 13, "max_ticks = 100");
  REQUIRE(pmusim_scenario_parse(text.data(), text.size(), &sc) == PMUSIM_OK);

  pmusim_mission *m = nullptr;
  CHECK(pmusim_mission_run(sc, &m) == PMUSIM_TIMEOUT);
  REQUIRE(m != nullptr);
  CHECK(pmusim_mission_trace_size(m) == 101);
  CHECK(pmusim_mission_write_trace(m, tmp.file("trace.csv").c_str()) == PMUSIM_OK);
  pmusim_mission_free(m);
  pmusim_scenario_free(sc);
}

TEST_CASE("comparison") {
  TempDir tmp;
  pmusim_scenario *sc = bundled("suite");
  pmusim_comparison *c1 = nullptr, *c2 = nullptr;
  REQUIRE(pmusim_compare_run(sc, 1, &c1) == PMUSIM_OK);
  REQUIRE(pmusim_compare_run(sc, 3, &c2) == PMUSIM_OK);
  CHECK(pmusim_comparison_rows(c1) == 36);
  REQUIRE(pmusim_comparison_write_csv(c1, tmp.file("c1.csv").c_str()) == PMUSIM_OK);
  REQUIRE(pmusim_comparison_write_csv(c2, tmp.file("c2.csv").c_str()) == PMUSIM_OK);
  CHECK(slurp(tmp.path / "c1.csv") == slurp(tmp.path / "c2.csv"));
  pmusim_comparison_free(c1);
  pmusim_comparison_free(c2);
  pmusim_scenario_free(sc);
}
