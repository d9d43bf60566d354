// SPDX-License-Identifier: Apache-2.0
// pmusim: command-line front end over the C API.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pmusim/pmusim.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

template <class T, void (*Free)(T *)>
struct Deleter {
  void operator()(T *p) const { Free(p); }
};
using Scenario = std::unique_ptr<pmusim_scenario, Deleter<pmusim_scenario, pmusim_scenario_free>>;
using Grid = std::unique_ptr<pmusim_grid, Deleter<pmusim_grid, pmusim_grid_free>>;
using Frontier = std::unique_ptr<pmusim_frontier, Deleter<pmusim_frontier, pmusim_frontier_free>>;
using Mission = std::unique_ptr<pmusim_mission, Deleter<pmusim_mission, pmusim_mission_free>>;
using Comparison =
    std::unique_ptr<pmusim_comparison, Deleter<pmusim_comparison, pmusim_comparison_free>>;

struct Failure {
  int code;
};

int exit_code(pmusim_status s) {
  switch (s) {
  case PMUSIM_OK:
    return kExitOk;
  case PMUSIM_CONFIG:
  case PMUSIM_INVALID_ARGUMENT:
  case PMUSIM_DOMAIN:
    return kExitConfig;
  default:
    return kExitRuntime;
  }
}

void check(pmusim_status s, const char *context, std::optional<int> code = std::nullopt) {
  if (s == PMUSIM_OK)
    return;
  std::fprintf(stderr, "pmusim: %s: %s\n", context, pmusim_last_error());
  throw Failure{code.value_or(exit_code(s))};
}

struct Options {
  std::string scenario;
  std::string grid;
  std::string out = ".";
  std::optional<double> entropy;
  std::string mode;
  std::optional<double> dt;
  std::string app;
  std::string environment;
  std::optional<long long> seed; // accepted, runs are deterministic
  unsigned threads = 0;
};

std::string out_file(const Options &o, const char *name) {
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) {
    std::fprintf(stderr, "pmusim: cannot create output directory '%s': %s\n", o.out.c_str(),
                 ec.message().c_str());
    throw Failure{kExitRuntime};
  }
  return (fs::path(o.out) / name).string();
}

Scenario load(const Options &o) {
  pmusim_scenario *raw = nullptr;
  // An unreadable scenario is a configuration problem, not a runtime one.
  check(pmusim_scenario_load(o.scenario.c_str(), &raw), "scenario", kExitConfig);
  Scenario sc(raw);
  if (!o.app.empty() || !o.environment.empty())
    check(pmusim_scenario_select(sc.get(), o.app.empty() ? nullptr : o.app.c_str(),
                                 o.environment.empty() ? nullptr : o.environment.c_str()),
          "selection");
  if (!o.mode.empty())
    check(pmusim_scenario_set_mode(sc.get(), o.mode.c_str()), "--mode");
  if (o.dt)
    check(pmusim_scenario_set_dt(sc.get(), *o.dt), "--dt");
  return sc;
}

Grid make_grid(const Options &o) {
  pmusim_grid *raw = nullptr;
  Scenario sc = load(o);
  check(pmusim_sweep(sc.get(), o.entropy ? &*o.entropy : nullptr, &raw), "sweep");
  return Grid(raw);
}

int cmd_sweep(const Options &o) {
  Grid grid = make_grid(o);
  check(pmusim_grid_write_csv(grid.get(), out_file(o, "grid.csv").c_str()), "grid.csv");
  check(pmusim_grid_write_svg(grid.get(), out_file(o, "grid.svg").c_str()), "grid.svg");
  std::printf("wrote %zu grid cells to %s\n", pmusim_grid_cells(grid.get()), o.out.c_str());
  return kExitOk;
}

int cmd_frontier(const Options &o) {
  Grid grid;
  if (!o.grid.empty()) {
    pmusim_grid *raw = nullptr;
    check(pmusim_grid_load_csv(o.grid.c_str(), &raw), "grid", kExitConfig);
    grid.reset(raw);
  } else {
    grid = make_grid(o);
  }
  pmusim_frontier *raw = nullptr;
  check(pmusim_frontier_compute(grid.get(), &raw), "frontier");
  Frontier fr(raw);
  check(pmusim_frontier_write_csv(fr.get(), out_file(o, "frontier.csv").c_str()), "frontier.csv");
  const std::size_t n = pmusim_frontier_size(fr.get());
  if (n == 0) {
    std::fprintf(stderr, "pmusim: warning: no feasible configuration, frontier is empty\n");
    return kExitOk;
  }
  double speed = 0, freq = 0, jpm = 0;
  const long best = pmusim_frontier_argmin(fr.get());
  check(pmusim_frontier_point(fr.get(), static_cast<std::size_t>(best), &speed, &freq, &jpm),
        "frontier");
  std::printf("frontier: %zu speeds, minimum %.6g J/m at %.6g m/s, %.6g Hz\n", n, jpm, speed,
              freq);
  return kExitOk;
}

int cmd_run(const Options &o) {
  Scenario sc = load(o);
  pmusim_mission *raw = nullptr;
  const pmusim_status st = pmusim_mission_run(sc.get(), &raw);
  Mission m(raw);
  const std::string error = st == PMUSIM_OK ? std::string() : pmusim_last_error();
  if (m) {
    // Flushed even after a timeout so the partial trace can be inspected.
    check(pmusim_mission_write_trace(m.get(), out_file(o, "trace.csv").c_str()), "trace.csv");
    check(pmusim_mission_write_decisions(m.get(), out_file(o, "decisions.csv").c_str()),
          "decisions.csv");
    check(pmusim_mission_write_report(m.get(), out_file(o, "report.txt").c_str()), "report.txt");
  }
  if (st != PMUSIM_OK) {
    std::fprintf(stderr, "pmusim: run: %s\n", error.c_str());
    return exit_code(st);
  }
  pmusim_energy_report r{};
  check(pmusim_mission_report(m.get(), &r), "report");
  std::printf("%zu samples, %.6g J over %.6g m (%.6g J/m), min throughput %.6g\n",
              pmusim_mission_trace_size(m.get()), r.e_total_j, r.distance_m, r.j_per_m,
              r.min_throughput);
  return kExitOk;
}

int cmd_compare(const Options &o) {
  Scenario sc = load(o);
  pmusim_comparison *raw = nullptr;
  check(pmusim_compare_run(sc.get(), o.threads, &raw), "compare");
  Comparison cmp(raw);
  check(pmusim_comparison_write_csv(cmp.get(), out_file(o, "compare.csv").c_str()), "compare.csv");
  std::printf("wrote %zu comparison rows to %s\n", pmusim_comparison_rows(cmp.get()),
              o.out.c_str());
  return kExitOk;
}

int cmd_init(const Options &o) {
  for (const char *name : {"low", "medium", "high", "suite", "mixed"}) {
    pmusim_scenario *raw = nullptr;
    check(pmusim_scenario_default(name, &raw), name);
    Scenario sc(raw);
    const std::string path = out_file(o, (std::string(name) + ".scn").c_str());
    check(pmusim_scenario_write(sc.get(), path.c_str()), path.c_str());
    std::printf("%s\n", path.c_str());
  }
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Closed-loop DVFS and motor speed co-management simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pmusim_version());

  Options o;
  auto scenario_opt = [&](CLI::App *cmd) {
    return cmd->add_option("--scenario", o.scenario, "Scenario file")->check(CLI::ExistingFile);
  };
  auto common = [&](CLI::App *cmd) {
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--dt", o.dt, "Simulation step in seconds");
    cmd->add_option("--app", o.app, "Application profile (default: scenario selection)");
    cmd->add_option("--environment", o.environment, "Environment (default: scenario selection)");
    cmd->add_option("--seed", o.seed, "Reserved; runs are deterministic");
  };

  auto *sweep = app.add_subcommand("sweep", "Steady-state grid sweep: grid.csv and grid.svg");
  scenario_opt(sweep)->required();
  common(sweep);
  sweep->add_option("--entropy", o.entropy, "Entropy override");

  auto *run = app.add_subcommand("run", "Closed-loop mission: trace.csv, decisions.csv, report.txt");
  scenario_opt(run)->required();
  common(run);
  run->add_option("--mode", o.mode, "controlled, hs, as, as-star or fixed:I,J");

  auto *cmp = app.add_subcommand("compare", "Controller against baselines: compare.csv");
  scenario_opt(cmp)->required();
  common(cmp);
  cmp->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");

  auto *front = app.add_subcommand("frontier", "Lowest feasible frequency per speed: frontier.csv");
  auto *fs_opt = scenario_opt(front);
  auto *grid_opt =
      front->add_option("--grid", o.grid, "Grid CSV from 'sweep'")->check(CLI::ExistingFile);
  fs_opt->excludes(grid_opt);
  common(front);
  front->add_option("--entropy", o.entropy, "Entropy override (with --scenario)");

  auto *init = app.add_subcommand("init", "Write the bundled scenario files");
  init->add_option("--out", o.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep)
      return cmd_sweep(o);
    if (*run)
      return cmd_run(o);
    if (*cmp)
      return cmd_compare(o);
    if (*front) {
      if (o.scenario.empty() && o.grid.empty()) {
        std::fprintf(stderr, "pmusim: frontier: one of --scenario or --grid is required\n");
        return kExitConfig;
      }
      return cmd_frontier(o);
    }
    return cmd_init(o);
  } catch (const Failure &f) {
    return f.code;
  }
}
