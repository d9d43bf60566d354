// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scenario files: an INI-like text format holding plant calibration, the
// DVFS table, the speed ladder, application profiles, environments,
// controller parameters and the run selection. Units are spelled out in the
// key names. Example:
//
//   format = pmusim-scenario/1
//   name = medium
//
//   [motor]
//   p_idle_w = 1.0
//   ...
//   [dvfs]
//   level = 300000000 0.6        # frequency_hz voltage_v
//   [speeds]
//   speed_mps = 0.5
//   [app corner]
//   cycles_per_event = 2990
//   [environment medium]
//   segment = 100 3.3            # length_m entropy
//   [controller]
//   energy_threshold_rel = -0.01
//   [run]
//   mode = controlled            # controlled | hs | as | as-star | fixed:I,J

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pmusim/controller.hpp"
#include "pmusim/plant.hpp"
#include "pmusim/sim.hpp"

namespace pmusim {

inline constexpr std::string_view kScenarioFormat = "pmusim-scenario/1";

struct Scenario {
  std::string name;
  PlantModels models;
  std::vector<AppProfile> apps;
  std::vector<EnvironmentProfile> environments;
  ControllerParams controller;
  double dt_s = 1e-3;
  RunMode mode;
  std::string run_app;         ///< empty selects the first app
  std::string run_environment; ///< empty selects the first environment
  std::size_t max_ticks = 0;

  const AppProfile &selected_app() const;
  const EnvironmentProfile &selected_environment() const;
  /// Mission configuration for the selected app and environment.
  SimConfig sim_config() const;

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

/// Throws ConfigError with line/key diagnostics.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path &path);
std::string serialize_scenario(const Scenario &scenario);

/// "controlled", "hs", "as", "as-star" or "fixed:I,J". Throws ConfigError.
RunMode parse_mode(std::string_view text, GridShape grid);
std::string format_mode(const RunMode &mode);

namespace defaults {
/// Bundled scenario sets: one environment per complexity class with all
/// three apps, the 3x3 comparison suite, and a three-segment mission whose
/// entropy steps down at each boundary.
Scenario low();
Scenario medium();
Scenario high();
Scenario suite();
Scenario mixed();
} // namespace defaults

} // namespace pmusim
