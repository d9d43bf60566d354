// SPDX-License-Identifier: Apache-2.0
#include "pmusim/energy.hpp"

#include <algorithm>
#include <cmath>

#include "pmusim/error.hpp"

namespace pmusim {

EnergyReport integrate_energy(std::span<const TraceSample> trace) {
  if (trace.size() < 2)
    throw MalformedTrace("trace needs at least two samples");

  EnergyReport r;
  double throughput_area = 0.0;
  r.min_throughput = trace.front().throughput;
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const TraceSample &a = trace[k - 1];
    const TraceSample &b = trace[k];
    const double dt = b.time_s - a.time_s;
    if (!(dt > 0.0))
      throw MalformedTrace("trace time must be strictly increasing (sample " +
                           std::to_string(k) + ")");
    r.e_motor_j += 0.5 * (a.p_motor_w + b.p_motor_w) * dt;
    r.e_cpu_j += 0.5 * (a.p_cpu_w + b.p_cpu_w) * dt;
    throughput_area += 0.5 * (a.throughput + b.throughput) * dt;
    r.min_throughput = std::min(r.min_throughput, b.throughput);
  }
  r.e_total_j = r.e_motor_j + r.e_cpu_j;
  r.duration_s = trace.back().time_s - trace.front().time_s;
  r.distance_m = trace.back().position_m - trace.front().position_m;
  if (!(r.distance_m > 0.0))
    throw MalformedTrace("trace covers no distance");
  r.j_per_m = r.e_total_j / r.distance_m;
  r.mean_throughput = throughput_area / r.duration_s;
  return r;
}

double locomotion_cost(double p_total_w, double speed_mps) {
  if (!(speed_mps > 0.0))
    throw DomainError("locomotion_cost: speed must be > 0");
  return p_total_w / speed_mps;
}

EnergyReport steady_state_mission_energy(OperatingPoint point, const Segment &segment,
                                         const PlantModels &models, const AppProfile &app) {
  if (!(segment.length_m > 0.0))
    throw DomainError("segment length must be > 0");
  const PlantState s = evaluate_plant(models, app, point, segment.entropy);
  EnergyReport r;
  r.duration_s = segment.length_m / s.speed_mps;
  r.distance_m = segment.length_m;
  r.e_motor_j = s.p_motor_w * r.duration_s;
  r.e_cpu_j = s.p_cpu_w * r.duration_s;
  r.e_total_j = r.e_motor_j + r.e_cpu_j;
  r.j_per_m = r.e_total_j / r.distance_m;
  r.min_throughput = s.throughput;
  r.mean_throughput = s.throughput;
  return r;
}

} // namespace pmusim
