// SPDX-License-Identifier: Apache-2.0
#pragma once

// Parametric plant: motor power, event generation, workload, CPU capacity,
// CPU power and throughput. Everything here is a pure function.

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pmusim {

struct DvfsLevel {
  double frequency_hz = 0.0;
  double voltage_v = 0.0;

  friend bool operator==(const DvfsLevel &, const DvfsLevel &) = default;
};

/// Ordered DVFS levels: strictly increasing frequency, non-decreasing voltage.
class DvfsTable {
public:
  DvfsTable() = default;
  explicit DvfsTable(std::vector<DvfsLevel> levels);

  /// `count` levels log-spaced in frequency between f_min and f_max with
  /// voltage affine in frequency from v_min to v_max.
  static DvfsTable log_spaced(std::size_t count, double f_min_hz, double f_max_hz,
                              double v_min, double v_max);

  std::size_t size() const noexcept { return levels_.size(); }
  const DvfsLevel &operator[](std::size_t i) const { return levels_.at(i); }
  std::span<const DvfsLevel> levels() const noexcept { return levels_; }

  friend bool operator==(const DvfsTable &, const DvfsTable &) = default;

private:
  std::vector<DvfsLevel> levels_;
};

/// Strictly increasing, positive robot speeds in m/s. The motor-voltage knob
/// maps one-to-one onto these steady-state speeds.
class SpeedLadder {
public:
  SpeedLadder() = default;
  explicit SpeedLadder(std::vector<double> speeds_mps);

  static SpeedLadder linear(std::size_t count, double lo_mps, double hi_mps);

  std::size_t size() const noexcept { return speeds_.size(); }
  double operator[](std::size_t i) const { return speeds_.at(i); }
  std::span<const double> speeds() const noexcept { return speeds_; }

  friend bool operator==(const SpeedLadder &, const SpeedLadder &) = default;

private:
  std::vector<double> speeds_;
};

/// p = p_idle + c_lin*v + c_cube*v^3
struct MotorModelParams {
  double p_idle_w = 0.0;
  double c_lin_w_per_mps = 0.0;
  double c_cube_w_per_mps3 = 0.0;

  void validate() const;
  friend bool operator==(const MotorModelParams &, const MotorModelParams &) = default;
};

/// p = k_static*V + k_switch*V^2*f*max(u, floor)
struct CpuModelParams {
  double p_static_w_per_v = 0.0;
  double switch_j_per_v2_cycle = 0.0;
  double idle_utilization_floor = 0.0;
  double effective_ipc = 1.0; ///< cycles per clock summed over the cluster's cores

  void validate() const;
  friend bool operator==(const CpuModelParams &, const CpuModelParams &) = default;
};

/// rate = min(cap, base + gain*entropy*speed)
struct EventModelParams {
  double base_rate_eps = 0.0;
  double gain_eps_per_entropy_mps = 1.0;
  double sensor_cap_eps = 1.0e7;

  void validate() const;
  friend bool operator==(const EventModelParams &, const EventModelParams &) = default;
};

struct AppProfile {
  std::string name;
  double cycles_per_event = 1.0;
  double required_throughput = 1.0;

  void validate() const;
  friend bool operator==(const AppProfile &, const AppProfile &) = default;
};

struct Segment {
  double length_m = 0.0;
  double entropy = 0.0;

  friend bool operator==(const Segment &, const Segment &) = default;
};

struct EnvironmentProfile {
  std::string name;
  std::vector<Segment> segments;

  void validate() const;
  double total_length() const noexcept;
  /// Segment index holding `position`; a position exactly on a boundary
  /// belongs to the segment that starts there.
  std::size_t segment_index_at(double position_m) const noexcept;
  /// Cumulative end position of segment `i`.
  double segment_end(std::size_t i) const noexcept;

  friend bool operator==(const EnvironmentProfile &, const EnvironmentProfile &) = default;
};

struct GridShape {
  std::size_t dvfs_levels = 0;
  std::size_t speed_levels = 0;

  std::size_t cells() const noexcept { return dvfs_levels * speed_levels; }
  friend bool operator==(const GridShape &, const GridShape &) = default;
};

/// Joint actuation: (DVFS level index, speed level index).
struct OperatingPoint {
  std::size_t dvfs_index = 0;
  std::size_t speed_index = 0;

  bool within(GridShape g) const noexcept {
    return dvfs_index < g.dvfs_levels && speed_index < g.speed_levels;
  }
  friend auto operator<=>(const OperatingPoint &, const OperatingPoint &) = default;
};

struct PlantModels {
  DvfsTable dvfs;
  SpeedLadder speeds;
  MotorModelParams motor;
  CpuModelParams cpu;
  EventModelParams events;

  GridShape shape() const noexcept { return {dvfs.size(), speeds.size()}; }
  void validate() const;

  friend bool operator==(const PlantModels &, const PlantModels &) = default;
};

double motor_power(double speed_mps, const MotorModelParams &params);
double event_rate(double entropy, double speed_mps, const EventModelParams &params);
double workload(double event_rate_eps, const AppProfile &app);
double cpu_capacity(const DvfsLevel &level, double effective_ipc);
/// Fraction of offered work processed: min(1, capacity/workload), 1 when idle.
double throughput(double workload_cps, double capacity_cps);
/// min(1, workload/capacity)
double utilization(double workload_cps, double capacity_cps);
double cpu_power(const DvfsLevel &level, double utilization, const CpuModelParams &params);

/// Steady-state plant quantities at one configuration and entropy.
struct PlantState {
  double speed_mps = 0.0;
  double event_rate_eps = 0.0;
  double workload_cps = 0.0;
  double capacity_cps = 0.0;
  double throughput = 1.0;
  double utilization = 0.0;
  double p_motor_w = 0.0;
  double p_cpu_w = 0.0;

  double p_total_w() const noexcept { return p_motor_w + p_cpu_w; }
};

PlantState evaluate_plant(const PlantModels &models, const AppProfile &app, OperatingPoint point,
                          double entropy);

/// Defaults used by the bundled scenarios.
namespace defaults {
PlantModels models();
AppProfile reconstruction();
AppProfile corner_filtered();
AppProfile corner();
std::vector<AppProfile> apps();
double low_entropy();
double medium_entropy();
double high_entropy();
} // namespace defaults

} // namespace pmusim
