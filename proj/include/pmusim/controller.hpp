// SPDX-License-Identifier: Apache-2.0
#pragma once

// Performance Management Unit: hill climbing over the (DVFS level, speed
// level) grid, re-triggered whenever the sensed entropy moves by more than a
// threshold. Candidates are only accepted at zero throughput error.

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pmusim/plant.hpp"

namespace pmusim {

enum class Neighborhood { VonNeumann4, Moore8 };

/// Acceptance threshold on the cost change (new - best). With `relative`
/// set, the value is a fraction of the current best cost.
struct EnergyThreshold {
  double value = -0.01;
  bool relative = true;

  double resolve(double best_cost) const noexcept {
    return relative ? value * best_cost : value;
  }
  /// Whether a move from `best_cost` to `new_cost` counts as an improvement.
  bool accepts(double new_cost, double best_cost) const noexcept;

  friend bool operator==(const EnergyThreshold &, const EnergyThreshold &) = default;
};

struct ControllerParams {
  double entropy_threshold = 0.25;
  EnergyThreshold energy_threshold;
  double settle_time_s = 0.05;
  Neighborhood neighborhood = Neighborhood::Moore8;

  void validate() const;
  friend bool operator==(const ControllerParams &, const ControllerParams &) = default;
};

/// One sampling of the controller's feedback signals.
struct Measurements {
  double p_cpu_w = 0.0;
  double p_motor_w = 0.0;
  double throughput_error = 0.0; ///< max(0, required - achieved)
  double entropy = 0.0;

  bool valid() const noexcept;
};

Measurements measure(const PlantState &plant, const AppProfile &app, double entropy);

enum class Phase { Idle, Climbing, Done };

struct ControllerState {
  OperatingPoint current;   ///< last accepted configuration
  OperatingPoint actuation; ///< configuration most recently commanded
  double best_cost = std::numeric_limits<double>::infinity(); ///< J/m of `current`
  double tracked_entropy = 0.0;
  Phase phase = Phase::Idle;
  bool degraded = false;

  // Climbing bookkeeping.
  std::vector<OperatingPoint> pending;
  std::size_t next = 0;
  OperatingPoint sweep_best;
  double applied_at_s = 0.0;
  bool measure_current = false; ///< next evaluation measures `current` itself
  bool fallback_used = false;
  std::size_t evaluations = 0; ///< evaluations in the running (or last) climb
};

struct DecisionRecord {
  double time_s = 0.0;
  std::string event; ///< trigger, evaluate, move, fallback, converged, degraded, rejected
  OperatingPoint from;
  OperatingPoint to;
  double cost_jpm = std::numeric_limits<double>::quiet_NaN();
  bool feasible = false;
};

struct TickOutput {
  ControllerState state;
  OperatingPoint actuation;
  std::vector<DecisionRecord> decisions;
};

/// Conservative start: highest DVFS level, lowest speed.
OperatingPoint initialize(const AppProfile &app, GridShape grid);
ControllerState initial_state(const AppProfile &app, GridShape grid);

/// Grid neighbours in ascending (dvfs_index, speed_index) order, clipped to
/// the grid, excluding `p`.
std::vector<OperatingPoint> neighbors(OperatingPoint p, GridShape grid, Neighborhood hood);

/// One controller step. `speeds` converts candidate speed indices to m/s for
/// the J/m objective. Invalid measurements leave the state unchanged.
TickOutput on_tick(const ControllerState &state, const Measurements &m,
                   const ControllerParams &params, const SpeedLadder &speeds,
                   std::size_t dvfs_levels, double clock_s);

struct Evaluation {
  double cost = 0.0;
  bool feasible = false;
};

struct ClimbResult {
  OperatingPoint point;
  double cost = std::numeric_limits<double>::infinity();
  bool feasible = false;
  std::size_t evaluations = 0;
  std::size_t moves = 0;
};

/// Pure-functional core of the climbing phase of on_tick: best-improvement
/// local search from `start` with a frozen evaluator.
ClimbResult climb(OperatingPoint start, GridShape grid, Neighborhood hood,
                  const EnergyThreshold &threshold,
                  const std::function<Evaluation(OperatingPoint)> &evaluate);

enum class Baseline { HS, AS, AS_star };

OperatingPoint baseline_config(Baseline kind, GridShape grid);
const char *to_string(Baseline kind) noexcept;
const char *to_string(Neighborhood hood) noexcept;

/// Stateful convenience wrapper around on_tick.
class Controller {
public:
  Controller(const AppProfile &app, const SpeedLadder &speeds, std::size_t dvfs_levels,
             ControllerParams params);

  OperatingPoint tick(const Measurements &m, double clock_s);

  const ControllerState &state() const noexcept { return state_; }
  const std::vector<DecisionRecord> &decisions() const noexcept { return log_; }

private:
  SpeedLadder speeds_;
  std::size_t dvfs_levels_;
  ControllerParams params_;
  ControllerState state_;
  std::vector<DecisionRecord> log_;
};

} // namespace pmusim
