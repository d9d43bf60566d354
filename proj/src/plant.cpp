// SPDX-License-Identifier: Apache-2.0
#include "pmusim/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmusim/error.hpp"

namespace pmusim {

namespace {

void require(bool ok, const char *what) {
  if (!ok)
    throw DomainError(what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

} // namespace

DvfsTable::DvfsTable(std::vector<DvfsLevel> levels) : levels_(std::move(levels)) {
  require(!levels_.empty(), "DVFS table must not be empty");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto &l = levels_[i];
    require(std::isfinite(l.frequency_hz) && l.frequency_hz > 0.0, "DVFS frequency must be > 0");
    require(std::isfinite(l.voltage_v) && l.voltage_v > 0.0, "DVFS voltage must be > 0");
    if (i > 0) {
      require(l.frequency_hz > levels_[i - 1].frequency_hz,
              "DVFS levels must be strictly increasing in frequency");
      require(l.voltage_v >= levels_[i - 1].voltage_v,
              "DVFS voltage must be non-decreasing in frequency");
    }
  }
}

DvfsTable DvfsTable::log_spaced(std::size_t count, double f_min_hz, double f_max_hz, double v_min,
                                double v_max) {
  require(count > 0, "DVFS table needs at least one level");
  std::vector<DvfsLevel> levels(count);
  const double ratio = count > 1 ? std::pow(f_max_hz / f_min_hz, 1.0 / double(count - 1)) : 1.0;
  for (std::size_t i = 0; i < count; ++i) {
    // Endpoints pinned so the table hits f_max exactly.
    const double f = i == 0           ? f_min_hz
                     : i + 1 == count ? f_max_hz
                                      : f_min_hz * std::pow(ratio, double(i));
    const double t = count > 1 ? (f - f_min_hz) / (f_max_hz - f_min_hz) : 1.0;
    levels[i] = {f, v_min + (v_max - v_min) * t};
  }
  return DvfsTable(std::move(levels));
}

SpeedLadder::SpeedLadder(std::vector<double> speeds_mps) : speeds_(std::move(speeds_mps)) {
  require(!speeds_.empty(), "speed ladder must not be empty");
  for (std::size_t i = 0; i < speeds_.size(); ++i) {
    require(std::isfinite(speeds_[i]) && speeds_[i] > 0.0, "speeds must be > 0");
    if (i > 0)
      require(speeds_[i] > speeds_[i - 1], "speeds must be strictly increasing");
  }
}

SpeedLadder SpeedLadder::linear(std::size_t count, double lo_mps, double hi_mps) {
  require(count > 0, "speed ladder needs at least one level");
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i)
    v[i] = count > 1 ? lo_mps + (hi_mps - lo_mps) * double(i) / double(count - 1) : lo_mps;
  return SpeedLadder(std::move(v));
}

void MotorModelParams::validate() const {
  require(finite_nonneg(p_idle_w) && finite_nonneg(c_lin_w_per_mps) &&
              finite_nonneg(c_cube_w_per_mps3),
          "motor coefficients must be finite and >= 0");
  require(c_lin_w_per_mps > 0.0 || c_cube_w_per_mps3 > 0.0,
          "motor model needs a positive linear or cubic coefficient");
}

void CpuModelParams::validate() const {
  require(finite_nonneg(p_static_w_per_v) && finite_nonneg(switch_j_per_v2_cycle),
          "CPU power coefficients must be finite and >= 0");
  require(finite_nonneg(idle_utilization_floor) && idle_utilization_floor < 1.0,
          "idle utilization floor must lie in [0, 1)");
  require(std::isfinite(effective_ipc) && effective_ipc > 0.0, "effective IPC must be > 0");
}

void EventModelParams::validate() const {
  require(finite_nonneg(base_rate_eps), "event base rate must be >= 0");
  require(std::isfinite(gain_eps_per_entropy_mps) && gain_eps_per_entropy_mps > 0.0,
          "event gain must be > 0");
  require(std::isfinite(sensor_cap_eps) && sensor_cap_eps > 0.0, "sensor cap must be > 0");
}

void AppProfile::validate() const {
  require(!name.empty(), "application name must not be empty");
  require(std::isfinite(cycles_per_event) && cycles_per_event > 0.0,
          "cycles per event must be > 0");
  require(required_throughput > 0.0 && required_throughput <= 1.0,
          "required throughput must lie in (0, 1]");
}

void EnvironmentProfile::validate() const {
  require(!segments.empty(), "environment needs at least one segment");
  for (const auto &s : segments) {
    require(std::isfinite(s.length_m) && s.length_m > 0.0, "segment length must be > 0");
    require(finite_nonneg(s.entropy), "segment entropy must be >= 0");
  }
}

double EnvironmentProfile::total_length() const noexcept {
  double total = 0.0;
  for (const auto &s : segments)
    total += s.length_m;
  return total;
}

double EnvironmentProfile::segment_end(std::size_t i) const noexcept {
  double end = 0.0;
  for (std::size_t k = 0; k <= i && k < segments.size(); ++k)
    end += segments[k].length_m;
  return end;
}

std::size_t EnvironmentProfile::segment_index_at(double position_m) const noexcept {
  double end = 0.0;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    end += segments[k].length_m;
    if (position_m < end)
      return k;
  }
  return segments.empty() ? 0 : segments.size() - 1;
}

void PlantModels::validate() const {
  require(dvfs.size() > 0, "DVFS table must not be empty");
  require(speeds.size() > 0, "speed ladder must not be empty");
  motor.validate();
  cpu.validate();
  events.validate();
}

double motor_power(double speed_mps, const MotorModelParams &params) {
  require(speed_mps >= 0.0, "motor_power: speed must be >= 0");
  return params.p_idle_w + params.c_lin_w_per_mps * speed_mps +
         params.c_cube_w_per_mps3 * speed_mps * speed_mps * speed_mps;
}

double event_rate(double entropy, double speed_mps, const EventModelParams &params) {
  require(entropy >= 0.0, "event_rate: entropy must be >= 0");
  require(speed_mps >= 0.0, "event_rate: speed must be >= 0");
  const double rate = params.base_rate_eps + params.gain_eps_per_entropy_mps * entropy * speed_mps;
  return std::min(rate, params.sensor_cap_eps);
}

double workload(double event_rate_eps, const AppProfile &app) {
  require(event_rate_eps >= 0.0, "workload: event rate must be >= 0");
  return event_rate_eps * app.cycles_per_event;
}

double cpu_capacity(const DvfsLevel &level, double effective_ipc) {
  require(effective_ipc > 0.0, "cpu_capacity: effective IPC must be > 0");
  return level.frequency_hz * effective_ipc;
}

double throughput(double workload_cps, double capacity_cps) {
  require(capacity_cps > 0.0, "throughput: capacity must be > 0");
  require(workload_cps >= 0.0, "throughput: workload must be >= 0");
  if (workload_cps <= capacity_cps)
    return 1.0;
  return capacity_cps / workload_cps;
}

double utilization(double workload_cps, double capacity_cps) {
  require(capacity_cps > 0.0, "utilization: capacity must be > 0");
  require(workload_cps >= 0.0, "utilization: workload must be >= 0");
  return std::min(1.0, workload_cps / capacity_cps);
}

double cpu_power(const DvfsLevel &level, double utilization, const CpuModelParams &params) {
  require(utilization >= 0.0 && utilization <= 1.0, "cpu_power: utilization must lie in [0, 1]");
  const double v = level.voltage_v;
  const double activity = std::max(utilization, params.idle_utilization_floor);
  return params.p_static_w_per_v * v +
         params.switch_j_per_v2_cycle * v * v * level.frequency_hz * activity;
}

PlantState evaluate_plant(const PlantModels &models, const AppProfile &app, OperatingPoint point,
                          double entropy) {
  if (!point.within(models.shape()))
    throw DomainError("operating point outside the configuration grid");
  PlantState s;
  s.speed_mps = models.speeds[point.speed_index];
  const DvfsLevel &level = models.dvfs[point.dvfs_index];
  s.event_rate_eps = event_rate(entropy, s.speed_mps, models.events);
  s.workload_cps = workload(s.event_rate_eps, app);
  s.capacity_cps = cpu_capacity(level, models.cpu.effective_ipc);
  s.throughput = throughput(s.workload_cps, s.capacity_cps);
  s.utilization = utilization(s.workload_cps, s.capacity_cps);
  s.p_motor_w = motor_power(s.speed_mps, models.motor);
  s.p_cpu_w = cpu_power(level, s.utilization, models.cpu);
  return s;
}

namespace defaults {

// Calibration chosen so that every default scenario has a unimodal
// energy-per-meter frontier with its optimum strictly inside the grid.
PlantModels models() {
  PlantModels m;
  m.dvfs = DvfsTable::log_spaced(12, 0.3e9, 2.0e9, 0.6, 1.1);
  m.speeds = SpeedLadder::linear(10, 0.5, 5.0);
  m.motor = {0.53, 0.68, 0.486};
  m.cpu = {4.37, 3.09e-9, 0.05, 4.0};
  m.events = {232000.0, 27700.0, 1.0e7};
  return m;
}

AppProfile reconstruction() { return {"reconstruction", 3060.0, 1.0}; }
AppProfile corner_filtered() { return {"corner_filtered", 6240.0, 1.0}; }
AppProfile corner() { return {"corner", 12700.0, 1.0}; }
std::vector<AppProfile> apps() { return {reconstruction(), corner_filtered(), corner()}; }

double low_entropy() { return 1.18; }
double medium_entropy() { return 2.26; }
double high_entropy() { return 4.35; }

} // namespace defaults

} // namespace pmusim
