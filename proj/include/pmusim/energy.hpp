// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include "pmusim/plant.hpp"

namespace pmusim {

struct TraceSample {
  double time_s = 0.0;
  double position_m = 0.0;
  double speed_mps = 0.0;
  std::size_t dvfs_index = 0;
  double p_motor_w = 0.0;
  double p_cpu_w = 0.0;
  double throughput = 1.0;
  double entropy = 0.0;
  double event_rate_eps = 0.0;
};

struct EnergyReport {
  double e_total_j = 0.0;
  double e_motor_j = 0.0;
  double e_cpu_j = 0.0;
  double duration_s = 0.0;
  double distance_m = 0.0;
  double j_per_m = 0.0;
  double min_throughput = 1.0;
  double mean_throughput = 1.0; ///< time-weighted
};

/// Trapezoidal integral of motor and CPU power over the trace. Distance is
/// the position travelled between the first and last sample.
/// Throws MalformedTrace for fewer than two samples, non-increasing time,
/// or a trace that does not move.
EnergyReport integrate_energy(std::span<const TraceSample> trace);

/// Energy per unit distance, J/m. Throws DomainError unless speed > 0.
double locomotion_cost(double p_total_w, double speed_mps);

/// Closed-form energy for crossing `segment` at a fixed configuration.
EnergyReport steady_state_mission_energy(OperatingPoint point, const Segment &segment,
                                         const PlantModels &models, const AppProfile &app);

} // namespace pmusim
