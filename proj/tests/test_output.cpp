// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "pmusim/error.hpp"
#include "pmusim/output.hpp"
#include "pmusim/scenario.hpp"

using namespace pmusim;

namespace {

std::vector<std::string> lines(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    out.push_back(l);
  return out;
}

std::string grid_text(const SweepGrid &g) {
  std::ostringstream out;
  write_grid_csv(out, g, "corner");
  return out.str();
}

SweepGrid reread(const std::string &text) {
  std::istringstream in(text);
  return read_grid_csv(in);
}

std::size_t count(const std::string &hay, const std::string &needle) {
  std::size_t n = 0;
  for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1))
    ++n;
  return n;
}

} // namespace

TEST_SUITE("output") {

TEST_CASE("grid CSV layout") {
  const SweepGrid g = sweep(defaults::high_entropy(), 100.0, defaults::models(), defaults::corner());
  const auto ls = lines(grid_text(g));
  REQUIRE(ls.size() == 2 + 120);
  CHECK(ls[0].rfind("# pmusim-grid/1 ", 0) == 0);
  CHECK(ls[1] == "dvfs_index,frequency_hz,speed_index,speed_mps,throughput,energy_j");
  CHECK(ls[2].rfind("0,3e+08,0,0.5,", 0) == 0);
  // Infeasible cells leave the energy column empty.
  std::size_t empty = 0;
  for (std::size_t k = 2; k < ls.size(); ++k)
    empty += ls[k].back() == ',';
  std::size_t infeasible = 0;
  for (const auto &c : g.cells)
    infeasible += !c.energy_j;
  CHECK(empty == infeasible);
  CHECK(infeasible > 0);
}

TEST_CASE("grid CSV round trip is exact") {
  for (const auto &app : defaults::apps()) {
    const SweepGrid g = sweep(defaults::medium_entropy(), 100.0, defaults::models(), app);
    const SweepGrid back = reread(grid_text(g));
    CHECK(back.shape.dvfs_levels == g.shape.dvfs_levels);
    CHECK(back.shape.speed_levels == g.shape.speed_levels);
    CHECK(back.entropy == g.entropy);
    CHECK(back.distance_m == g.distance_m);
    CHECK(back.frequencies_hz == g.frequencies_hz);
    CHECK(back.speeds_mps == g.speeds_mps);
    REQUIRE(back.cells.size() == g.cells.size());
    for (std::size_t k = 0; k < g.cells.size(); ++k) {
      CHECK(back.cells[k].point == g.cells[k].point);
      CHECK(back.cells[k].throughput == g.cells[k].throughput);
      CHECK(back.cells[k].energy_j == g.cells[k].energy_j);
    }
    CHECK(grid_text(back) == grid_text(g));
  }
}

TEST_CASE("frontier from a reloaded grid equals the in-process frontier") {
  const SweepGrid g = sweep(defaults::low_entropy(), 100.0, defaults::models(), defaults::corner());
  const auto a = frontier(g);
  const auto b = frontier(reread(grid_text(g)));
  REQUIRE(a.size() == b.size());
  std::ostringstream fa, fb;
  write_frontier_csv(fa, a, frontier_argmin(a), g.entropy);
  write_frontier_csv(fb, b, frontier_argmin(b), g.entropy);
  CHECK(fa.str() == fb.str());
  const auto ls = lines(fa.str());
  CHECK(ls[0].rfind("# pmusim-frontier/1", 0) == 0);
  CHECK(ls[1] == "speed_mps,min_frequency_hz,j_per_m,is_argmin");
  CHECK(count(fa.str(), ",1\n") == 1);
}

TEST_CASE("malformed grid files") {
  const SweepGrid g = sweep(defaults::low_entropy(), 100.0, defaults::models(), defaults::corner());
  const std::string good = grid_text(g);
  auto bad = [&](std::string text) { CHECK_THROWS_AS(reread(text), ConfigError); };

  bad("");
  bad("# pmusim-trace/1\n");
  bad(good.substr(0, good.find('\n') + 1) + "a,b,c\n");
  // Drop the last row: the grid is no longer a full rectangle.
  bad(good.substr(0, good.rfind('\n', good.size() - 2) + 1));
  std::string swapped = good;
  swapped.replace(swapped.find("\n0,3e+08,0,"), 11, "\n0,3e+08,1,");
  bad(swapped);
  std::string text = good;
  text.replace(text.find("0,3e+08,0,0.5,"), 14, "0,3e+08,0,abc,");
  try {
    reread(text);
    FAIL("expected a ConfigError");
  } catch (const ConfigError &e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("trace, decisions and report") {
  SimConfig cfg = defaults::medium().sim_config();
  const auto r = run_mission(cfg);

  std::ostringstream tr;
  write_trace_csv(tr, r.trace);
  const auto tl = lines(tr.str());
  CHECK(tl.size() == r.trace.size() + 2);
  CHECK(tl[0].rfind("# pmusim-trace/1", 0) == 0);

  std::ostringstream dc;
  write_decisions_csv(dc, r.decisions);
  const auto dl = lines(dc.str());
  CHECK(dl.size() == r.decisions.size() + 2);
  CHECK(count(dc.str(), ",converged,") >= 1);

  std::ostringstream rep;
  write_report(rep, r, "controlled");
  const std::string s = rep.str();
  CHECK(s.find("mode = controlled\n") != std::string::npos);
  CHECK(s.find("e_total_j = ") != std::string::npos);
  CHECK(s.find("degraded = false\n") != std::string::npos);
}

TEST_CASE("compare CSV") {
  const Scenario sc = defaults::suite();
  const auto rows = compare(sc.sim_config(), sc.environments, sc.apps, 1);
  std::ostringstream out;
  write_compare_csv(out, rows);
  const auto ls = lines(out.str());
  CHECK(ls.size() == rows.size() + 2);
  CHECK(ls[0].rfind("# pmusim-compare/1", 0) == 0);
  CHECK(ls[1].rfind("environment,app,mode,j_per_m,", 0) == 0);
}

TEST_CASE("SVG heatmap") {
  const SweepGrid g = sweep(defaults::high_entropy(), 100.0, defaults::models(), defaults::corner());
  std::ostringstream out;
  write_grid_svg(out, g, "high <corner> & co");
  const std::string s = out.str();
  CHECK(s.rfind("<svg ", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("high &lt;corner&gt; &amp; co") != std::string::npos);
  // Background plus one rect per cell plus the legend swatches.
  CHECK(count(s, "<rect ") >= 1 + g.cells.size());
}

} // TEST_SUITE
