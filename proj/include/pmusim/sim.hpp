// SPDX-License-Identifier: Apache-2.0
#pragma once

// Discrete-time closed-loop mission simulation, steady-state configuration
// sweeps, frontier extraction and baseline comparison.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmusim/controller.hpp"
#include "pmusim/energy.hpp"
#include "pmusim/plant.hpp"

namespace pmusim {

struct RunMode {
  enum class Kind { Controlled, Fixed };

  Kind kind = Kind::Controlled;
  OperatingPoint fixed; ///< only meaningful for Kind::Fixed

  static RunMode controlled() { return {}; }
  static RunMode fixed_at(OperatingPoint p) { return {Kind::Fixed, p}; }

  friend bool operator==(const RunMode &, const RunMode &) = default;
};

struct SimConfig {
  double dt_s = 1e-3;
  EnvironmentProfile environment;
  AppProfile app;
  PlantModels models;
  ControllerParams controller;
  RunMode mode;
  std::size_t max_ticks = 0; ///< 0 derives a limit from the slowest speed

  void validate() const;
};

struct MissionResult {
  std::vector<TraceSample> trace;
  EnergyReport report;
  std::vector<EnergyReport> segment_reports;
  std::vector<DecisionRecord> decisions;
  OperatingPoint final_point;
  bool degraded = false;
  /// Time of the first "converged" decision, if any.
  std::optional<double> first_convergence_s;
  /// Per-sample flag: the controller was idle at the point it converged to
  /// for the entropy it converged on. Always true in Fixed mode.
  std::vector<bool> settled;
};

class MissionTimeout : public std::runtime_error {
public:
  MissionTimeout(const std::string &what, MissionResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const MissionResult &partial() const noexcept { return partial_; }

private:
  MissionResult partial_;
};

/// Steps the plant at dt until the end of the environment is reached. Steps
/// are clipped so samples fall exactly on segment boundaries and at the end.
MissionResult run_mission(const SimConfig &cfg);

struct SweepCell {
  OperatingPoint point;
  double throughput = 0.0;
  std::optional<double> energy_j; ///< trip energy, only when throughput == 1
};

struct SweepGrid {
  GridShape shape;
  double entropy = 0.0;
  double distance_m = 0.0;
  std::vector<double> frequencies_hz;
  std::vector<double> speeds_mps;
  std::vector<SweepCell> cells; ///< row-major by dvfs_index, then speed_index

  const SweepCell &at(std::size_t dvfs_index, std::size_t speed_index) const;
  bool feasible(std::size_t dvfs_index, std::size_t speed_index) const {
    return at(dvfs_index, speed_index).energy_j.has_value();
  }
  std::optional<double> j_per_m(std::size_t dvfs_index, std::size_t speed_index) const;
};

SweepGrid sweep(double entropy, double distance_m, const PlantModels &models,
                const AppProfile &app);

struct FrontierPoint {
  std::size_t speed_index = 0;
  std::size_t dvfs_index = 0; ///< lowest feasible DVFS level at this speed
  double speed_mps = 0.0;
  double frequency_hz = 0.0;
  double j_per_m = 0.0;
};

std::vector<FrontierPoint> frontier(const SweepGrid &grid);
/// Index into `points` of the lowest J/m (first on ties).
std::optional<std::size_t> frontier_argmin(const std::vector<FrontierPoint> &points);
/// Feasible cell with the lowest J/m over the whole grid.
std::optional<OperatingPoint> sweep_argmin(const SweepGrid &grid);

enum class CompareMode { Controlled, HS, AS, AS_star };
const char *to_string(CompareMode mode) noexcept;

struct ComparisonRow {
  std::string environment;
  std::string app;
  CompareMode mode = CompareMode::Controlled;
  OperatingPoint final_point;
  EnergyReport report;
  /// 1 - J/m(controlled) / J/m(this row), same app and environment.
  double controlled_savings = 0.0;
};

/// Runs every (environment, app) pair under the controller and the three
/// fixed baselines. `base` supplies models, controller and dt. Rows are
/// ordered by environment, app, mode in input order. Missions run on up to
/// `threads` workers; the output does not depend on the thread count.
std::vector<ComparisonRow> compare(const SimConfig &base,
                                   const std::vector<EnvironmentProfile> &environments,
                                   const std::vector<AppProfile> &apps, unsigned threads = 0);

} // namespace pmusim
