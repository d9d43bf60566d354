// SPDX-License-Identifier: Apache-2.0
#include "pmusim/pmusim.h"

#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "pmusim/error.hpp"
#include "pmusim/output.hpp"
#include "pmusim/scenario.hpp"
#include "pmusim/sim.hpp"

struct pmusim_scenario {
  pmusim::Scenario value;
};

struct pmusim_grid {
  pmusim::SweepGrid value;
  std::string app;
};

struct pmusim_frontier {
  std::vector<pmusim::FrontierPoint> points;
  std::optional<std::size_t> argmin;
  double entropy = 0.0;
};

struct pmusim_mission {
  pmusim::MissionResult value;
  std::string mode;
};

struct pmusim_comparison {
  std::vector<pmusim::ComparisonRow> rows;
};

namespace {

thread_local std::string g_last_error;

pmusim_status fail(pmusim_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps exceptions from the core onto status codes.
template <class F>
pmusim_status guarded(F &&body) noexcept {
  try {
    return body();
  } catch (const pmusim::ConfigError &e) {
    return fail(PMUSIM_CONFIG, e.what());
  } catch (const pmusim::DomainError &e) {
    return fail(PMUSIM_DOMAIN, e.what());
  } catch (const pmusim::MissionTimeout &e) {
    return fail(PMUSIM_TIMEOUT, e.what());
  } catch (const std::bad_alloc &) {
    return fail(PMUSIM_RUNTIME, "out of memory");
  } catch (const std::exception &e) {
    return fail(PMUSIM_RUNTIME, e.what());
  } catch (...) {
    return fail(PMUSIM_RUNTIME, "unknown error");
  }
}

template <class W>
pmusim_status write_file(const char *path, W &&writer) {
  if (!path)
    return fail(PMUSIM_INVALID_ARGUMENT, "path is NULL");
  std::ostringstream buf;
  writer(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    return fail(PMUSIM_IO, std::string("cannot open '") + path + "' for writing");
  const std::string data = buf.str();
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.close();
  if (!out)
    return fail(PMUSIM_IO, std::string("failed writing '") + path + "'");
  return PMUSIM_OK;
}

#define PMUSIM_REQUIRE(cond, what)                                                                 \
  do {                                                                                             \
    if (!(cond))                                                                                   \
      return fail(PMUSIM_INVALID_ARGUMENT, what);                                                  \
  } while (0)

} // namespace

extern "C" {

const char *pmusim_version(void) { return "1.0.0"; }

const char *pmusim_last_error(void) { return g_last_error.c_str(); }

const char *pmusim_status_name(pmusim_status status) {
  switch (status) {
  case PMUSIM_OK: return "ok";
  case PMUSIM_INVALID_ARGUMENT: return "invalid argument";
  case PMUSIM_CONFIG: return "configuration error";
  case PMUSIM_RUNTIME: return "runtime error";
  case PMUSIM_DOMAIN: return "domain error";
  case PMUSIM_IO: return "i/o error";
  case PMUSIM_TIMEOUT: return "timeout";
  }
  return "unknown status";
}

pmusim_status pmusim_scenario_load(const char *path, pmusim_scenario **out) {
  PMUSIM_REQUIRE(path && out, "path and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    std::ifstream probe(path);
    if (!probe)
      return fail(PMUSIM_IO, std::string("cannot read scenario file '") + path + "'");
    *out = new pmusim_scenario{pmusim::load_scenario(path)};
    return PMUSIM_OK;
  });
}

pmusim_status pmusim_scenario_parse(const char *text, size_t length, pmusim_scenario **out) {
  PMUSIM_REQUIRE(text && out, "text and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new pmusim_scenario{pmusim::parse_scenario(std::string_view(text, length))};
    return PMUSIM_OK;
  });
}

pmusim_status pmusim_scenario_default(const char *name, pmusim_scenario **out) {
  PMUSIM_REQUIRE(name && out, "name and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    const std::string n = name;
    pmusim::Scenario sc;
    if (n == "low")
      sc = pmusim::defaults::low();
    else if (n == "medium")
      sc = pmusim::defaults::medium();
    else if (n == "high")
      sc = pmusim::defaults::high();
    else if (n == "suite")
      sc = pmusim::defaults::suite();
    else if (n == "mixed")
      sc = pmusim::defaults::mixed();
    else
      return fail(PMUSIM_INVALID_ARGUMENT, "unknown bundled scenario '" + n + "'");
    *out = new pmusim_scenario{std::move(sc)};
    return PMUSIM_OK;
  });
}

pmusim_status pmusim_scenario_write(const pmusim_scenario *scenario, const char *path) {
  PMUSIM_REQUIRE(scenario, "scenario is NULL");
  return guarded([&] {
    return write_file(path, [&](std::ostream &o) { o << pmusim::serialize_scenario(scenario->value); });
  });
}

pmusim_status pmusim_scenario_select(pmusim_scenario *scenario, const char *app,
                                     const char *environment) {
  PMUSIM_REQUIRE(scenario, "scenario is NULL");
  return guarded([&] {
    pmusim::Scenario next = scenario->value;
    if (app)
      next.run_app = app;
    if (environment)
      next.run_environment = environment;
    (void)next.selected_app();
    (void)next.selected_environment();
    scenario->value = std::move(next);
    return PMUSIM_OK;
  });
}

pmusim_status pmusim_scenario_set_mode(pmusim_scenario *scenario, const char *mode) {
  PMUSIM_REQUIRE(scenario && mode, "scenario and mode must not be NULL");
  return guarded([&] {
    scenario->value.mode = pmusim::parse_mode(mode, scenario->value.models.shape());
    return PMUSIM_OK;
  });
}

pmusim_status pmusim_scenario_set_dt(pmusim_scenario *scenario, double dt_s) {
  PMUSIM_REQUIRE(scenario, "scenario is NULL");
  return guarded([&] {
    pmusim::Scenario next = scenario->value;
    next.dt_s = dt_s;
    next.sim_config().validate();
    scenario->value = std::move(next);
    return PMUSIM_OK;
  });
}

void pmusim_scenario_free(pmusim_scenario *scenario) { delete scenario; }

pmusim_status pmusim_sweep(const pmusim_scenario *scenario, const double *entropy_override,
                           pmusim_grid **out) {
  PMUSIM_REQUIRE(scenario && out, "scenario and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    const auto &sc = scenario->value;
    const auto &env = sc.selected_environment();
    const double entropy = entropy_override ? *entropy_override : env.segments.front().entropy;
    *out = new pmusim_grid{pmusim::sweep(entropy, env.total_length(), sc.models, sc.selected_app()),
                           sc.selected_app().name};
    return PMUSIM_OK;
  });
}

pmusim_status pmusim_grid_load_csv(const char *path, pmusim_grid **out) {
  PMUSIM_REQUIRE(path && out, "path and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      return fail(PMUSIM_IO, std::string("cannot read grid file '") + path + "'");
    try {
      pmusim::SweepGrid g = pmusim::read_grid_csv(in);
      *out = new pmusim_grid{std::move(g), {}};
    } catch (const pmusim::ConfigError &e) {
      return fail(PMUSIM_CONFIG, std::string(path) + ": " + e.what());
    }
    return PMUSIM_OK;
  });
}

pmusim_status pmusim_grid_write_csv(const pmusim_grid *grid, const char *path) {
  PMUSIM_REQUIRE(grid, "grid is NULL");
  return guarded([&] {
    return write_file(path, [&](std::ostream &o) { pmusim::write_grid_csv(o, grid->value, grid->app); });
  });
}

pmusim_status pmusim_grid_write_svg(const pmusim_grid *grid, const char *path) {
  PMUSIM_REQUIRE(grid, "grid is NULL");
  return guarded([&] {
    std::string title = "throughput and trip energy";
    if (!grid->app.empty())
      title = grid->app + ": " + title;
    return write_file(path, [&](std::ostream &o) { pmusim::write_grid_svg(o, grid->value, title); });
  });
}

size_t pmusim_grid_cells(const pmusim_grid *grid) { return grid ? grid->value.cells.size() : 0; }

void pmusim_grid_free(pmusim_grid *grid) { delete grid; }

pmusim_status pmusim_frontier_compute(const pmusim_grid *grid, pmusim_frontier **out) {
  PMUSIM_REQUIRE(grid && out, "grid and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    auto points = pmusim::frontier(grid->value);
    auto argmin = pmusim::frontier_argmin(points);
    *out = new pmusim_frontier{std::move(points), argmin, grid->value.entropy};
    return PMUSIM_OK;
  });
}

size_t pmusim_frontier_size(const pmusim_frontier *frontier) {
  return frontier ? frontier->points.size() : 0;
}

pmusim_status pmusim_frontier_point(const pmusim_frontier *frontier, size_t index,
                                    double *speed_mps, double *frequency_hz, double *j_per_m) {
  PMUSIM_REQUIRE(frontier, "frontier is NULL");
  PMUSIM_REQUIRE(index < frontier->points.size(), "frontier index out of range");
  const auto &p = frontier->points[index];
  if (speed_mps)
    *speed_mps = p.speed_mps;
  if (frequency_hz)
    *frequency_hz = p.frequency_hz;
  if (j_per_m)
    *j_per_m = p.j_per_m;
  return PMUSIM_OK;
}

long pmusim_frontier_argmin(const pmusim_frontier *frontier) {
  if (!frontier || !frontier->argmin)
    return -1;
  return static_cast<long>(*frontier->argmin);
}

pmusim_status pmusim_frontier_write_csv(const pmusim_frontier *frontier, const char *path) {
  PMUSIM_REQUIRE(frontier, "frontier is NULL");
  return guarded([&] {
    return write_file(path, [&](std::ostream &o) {
      pmusim::write_frontier_csv(o, frontier->points, frontier->argmin, frontier->entropy);
    });
  });
}

void pmusim_frontier_free(pmusim_frontier *frontier) { delete frontier; }

pmusim_status pmusim_mission_run(const pmusim_scenario *scenario, pmusim_mission **out) {
  PMUSIM_REQUIRE(scenario && out, "scenario and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    const auto &sc = scenario->value;
    const std::string mode = pmusim::format_mode(sc.mode);
    try {
      *out = new pmusim_mission{pmusim::run_mission(sc.sim_config()), mode};
    } catch (const pmusim::MissionTimeout &e) {
      *out = new pmusim_mission{e.partial(), mode};
      return fail(PMUSIM_TIMEOUT, e.what());
    }
    return PMUSIM_OK;
  });
}

pmusim_status pmusim_mission_report(const pmusim_mission *mission, pmusim_energy_report *out) {
  PMUSIM_REQUIRE(mission && out, "mission and out must not be NULL");
  const auto &r = mission->value.report;
  *out = {r.e_total_j,  r.e_motor_j,  r.e_cpu_j,        r.duration_s,
          r.distance_m, r.j_per_m,    r.min_throughput, r.mean_throughput};
  return PMUSIM_OK;
}

size_t pmusim_mission_trace_size(const pmusim_mission *mission) {
  return mission ? mission->value.trace.size() : 0;
}

size_t pmusim_mission_decision_count(const pmusim_mission *mission) {
  return mission ? mission->value.decisions.size() : 0;
}

pmusim_status pmusim_mission_write_trace(const pmusim_mission *mission, const char *path) {
  PMUSIM_REQUIRE(mission, "mission is NULL");
  return guarded([&] {
    return write_file(path, [&](std::ostream &o) { pmusim::write_trace_csv(o, mission->value.trace); });
  });
}

pmusim_status pmusim_mission_write_decisions(const pmusim_mission *mission, const char *path) {
  PMUSIM_REQUIRE(mission, "mission is NULL");
  return guarded([&] {
    return write_file(path, [&](std::ostream &o) {
      pmusim::write_decisions_csv(o, mission->value.decisions);
    });
  });
}

pmusim_status pmusim_mission_write_report(const pmusim_mission *mission, const char *path) {
  PMUSIM_REQUIRE(mission, "mission is NULL");
  return guarded([&] {
    return write_file(path, [&](std::ostream &o) {
      pmusim::write_report(o, mission->value, mission->mode);
    });
  });
}

void pmusim_mission_free(pmusim_mission *mission) { delete mission; }

pmusim_status pmusim_compare_run(const pmusim_scenario *scenario, unsigned threads,
                                 pmusim_comparison **out) {
  PMUSIM_REQUIRE(scenario && out, "scenario and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    const auto &sc = scenario->value;
    *out = new pmusim_comparison{
        pmusim::compare(sc.sim_config(), sc.environments, sc.apps, threads)};
    return PMUSIM_OK;
  });
}

size_t pmusim_comparison_rows(const pmusim_comparison *comparison) {
  return comparison ? comparison->rows.size() : 0;
}

pmusim_status pmusim_comparison_write_csv(const pmusim_comparison *comparison, const char *path) {
  PMUSIM_REQUIRE(comparison, "comparison is NULL");
  return guarded([&] {
    return write_file(path, [&](std::ostream &o) { pmusim::write_compare_csv(o, comparison->rows); });
  });
}

void pmusim_comparison_free(pmusim_comparison *comparison) { delete comparison; }

} // extern "C"
