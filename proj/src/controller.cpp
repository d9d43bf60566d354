// SPDX-License-Identifier: Apache-2.0
#include "pmusim/controller.hpp"

#include <algorithm>
#include <cmath>

#include "pmusim/energy.hpp"
#include "pmusim/error.hpp"

namespace pmusim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tick clocks are sums of dt; allow for rounding when checking the settle window.
constexpr double kClockSlack = 1e-9;

OperatingPoint corner(GridShape grid) { return {grid.dvfs_levels - 1, 0}; }

class Stepper {
public:
  Stepper(TickOutput &out, const ControllerParams &params, const SpeedLadder &speeds,
          std::size_t dvfs_levels, double clock)
      : out_(out), s_(out.state), params_(params), speeds_(speeds),
        grid_{dvfs_levels, speeds.size()}, clock_(clock) {}

  void run(const Measurements &m) {
    if (s_.phase == Phase::Done)
      s_.phase = Phase::Idle;
    if (s_.phase == Phase::Idle)
      idle(m);
    else
      climbing(m);
    out_.actuation = s_.actuation;
  }

private:
  void idle(const Measurements &m) {
    if (!(std::abs(s_.tracked_entropy - m.entropy) > params_.entropy_threshold))
      return;
    s_.tracked_entropy = m.entropy;
    s_.evaluations = 0;
    s_.fallback_used = false;
    s_.degraded = false;
    s_.phase = Phase::Climbing;
    // `current` has been running since the last convergence, so this sample
    // already is its settled measurement.
    const Evaluation e = evaluate(s_.current, m);
    s_.best_cost = e.feasible ? e.cost : kInf;
    log("trigger", s_.current, s_.current, e.cost, e.feasible);
    begin_sweep();
  }

  void climbing(const Measurements &m) {
    if (clock_ - s_.applied_at_s < params_.settle_time_s - kClockSlack)
      return;

    if (s_.measure_current) {
      s_.measure_current = false;
      const Evaluation e = evaluate(s_.current, m);
      s_.best_cost = e.feasible ? e.cost : kInf;
      log("evaluate", s_.current, s_.current, e.cost, e.feasible);
      begin_sweep();
      return;
    }

    const OperatingPoint candidate = s_.pending[s_.next];
    const Evaluation e = evaluate(candidate, m);
    log("evaluate", s_.current, candidate, e.cost, e.feasible);
    if (e.feasible && params_.energy_threshold.accepts(e.cost, s_.best_cost)) {
      s_.sweep_best = candidate;
      s_.best_cost = e.cost;
    }
    if (++s_.next < s_.pending.size())
      apply(s_.pending[s_.next]);
    else
      finish_sweep();
  }

  void begin_sweep() {
    s_.pending = neighbors(s_.current, grid_, params_.neighborhood);
    s_.next = 0;
    s_.sweep_best = s_.current;
    if (s_.pending.empty())
      finish_sweep();
    else
      apply(s_.pending.front());
  }

  void finish_sweep() {
    if (s_.sweep_best != s_.current) {
      log("move", s_.current, s_.sweep_best, s_.best_cost, true);
      s_.current = s_.sweep_best;
      begin_sweep();
      return;
    }
    if (std::isfinite(s_.best_cost)) {
      s_.actuation = s_.current;
      s_.phase = Phase::Done;
      log("converged", s_.current, s_.current, s_.best_cost, true);
      return;
    }
    // Nothing feasible around an infeasible point: retreat to the conservative
    // corner once, then give up and hold it.
    const OperatingPoint safe = corner(grid_);
    if (!s_.fallback_used && s_.current != safe) {
      s_.fallback_used = true;
      log("fallback", s_.current, safe, kNaN, false);
      s_.current = safe;
      s_.measure_current = true;
      apply(safe);
      return;
    }
    s_.degraded = true;
    log("degraded", s_.current, safe, kNaN, false);
    s_.current = safe;
    s_.actuation = safe;
    s_.phase = Phase::Done;
  }

  void apply(OperatingPoint p) {
    s_.actuation = p;
    s_.applied_at_s = clock_;
  }

  Evaluation evaluate(OperatingPoint p, const Measurements &m) {
    ++s_.evaluations;
    return {locomotion_cost(m.p_cpu_w + m.p_motor_w, speeds_[p.speed_index]),
            m.throughput_error == 0.0};
  }

  void log(const char *event, OperatingPoint from, OperatingPoint to, double cost, bool feasible) {
    out_.decisions.push_back({clock_, event, from, to, cost, feasible});
  }

  TickOutput &out_;
  ControllerState &s_;
  const ControllerParams &params_;
  const SpeedLadder &speeds_;
  GridShape grid_;
  double clock_;
};

} // namespace

bool EnergyThreshold::accepts(double new_cost, double best_cost) const noexcept {
  if (!std::isfinite(best_cost))
    return std::isfinite(new_cost);
  return new_cost - best_cost < resolve(best_cost);
}

void ControllerParams::validate() const {
  if (!(std::isfinite(entropy_threshold) && entropy_threshold >= 0.0))
    throw DomainError("entropy threshold must be >= 0");
  if (!(std::isfinite(settle_time_s) && settle_time_s > 0.0))
    throw DomainError("settle time must be > 0");
  // A positive threshold accepts worsening moves and the climb may cycle.
  if (!(std::isfinite(energy_threshold.value) && energy_threshold.value <= 0.0))
    throw DomainError("energy threshold must be <= 0");
  if (energy_threshold.relative && energy_threshold.value <= -1.0)
    throw DomainError("relative energy threshold must lie in (-1, 0]");
}

bool Measurements::valid() const noexcept {
  auto ok = [](double x) { return std::isfinite(x) && x >= 0.0; };
  return ok(p_cpu_w) && ok(p_motor_w) && ok(throughput_error) && ok(entropy);
}

Measurements measure(const PlantState &plant, const AppProfile &app, double entropy) {
  return {plant.p_cpu_w, plant.p_motor_w, std::max(0.0, app.required_throughput - plant.throughput),
          entropy};
}

OperatingPoint initialize(const AppProfile & /*app*/, GridShape grid) {
  if (grid.cells() == 0)
    throw DomainError("configuration grid must not be empty");
  return corner(grid);
}

ControllerState initial_state(const AppProfile &app, GridShape grid) {
  ControllerState s;
  s.current = initialize(app, grid);
  s.actuation = s.current;
  s.sweep_best = s.current;
  s.tracked_entropy = 0.0;
  return s;
}

std::vector<OperatingPoint> neighbors(OperatingPoint p, GridShape grid, Neighborhood hood) {
  std::vector<OperatingPoint> out;
  out.reserve(8);
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      if (di == 0 && dj == 0)
        continue;
      if (hood == Neighborhood::VonNeumann4 && di != 0 && dj != 0)
        continue;
      const auto i = static_cast<long long>(p.dvfs_index) + di;
      const auto j = static_cast<long long>(p.speed_index) + dj;
      if (i < 0 || j < 0 || i >= static_cast<long long>(grid.dvfs_levels) ||
          j >= static_cast<long long>(grid.speed_levels))
        continue;
      out.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
    }
  }
  return out;
}

TickOutput on_tick(const ControllerState &state, const Measurements &m,
                   const ControllerParams &params, const SpeedLadder &speeds,
                   std::size_t dvfs_levels, double clock_s) {
  TickOutput out{state, state.actuation, {}};
  if (!m.valid()) {
    out.decisions.push_back({clock_s, "rejected", state.actuation, state.actuation, kNaN, false});
    return out;
  }
  Stepper(out, params, speeds, dvfs_levels, clock_s).run(m);
  return out;
}

ClimbResult climb(OperatingPoint start, GridShape grid, Neighborhood hood,
                  const EnergyThreshold &threshold,
                  const std::function<Evaluation(OperatingPoint)> &evaluate) {
  if (!start.within(grid))
    throw DomainError("climb: start outside the configuration grid");
  ClimbResult r;
  r.point = start;
  const Evaluation e0 = evaluate(start);
  ++r.evaluations;
  double best = e0.feasible ? e0.cost : kInf;

  // Every accepted move lowers the cost, so no cell is visited twice.
  while (r.moves < grid.cells()) {
    OperatingPoint sweep_best = r.point;
    for (const OperatingPoint &n : neighbors(r.point, grid, hood)) {
      const Evaluation e = evaluate(n);
      ++r.evaluations;
      if (e.feasible && threshold.accepts(e.cost, best)) {
        sweep_best = n;
        best = e.cost;
      }
    }
    if (sweep_best == r.point)
      break;
    r.point = sweep_best;
    ++r.moves;
  }
  r.cost = best;
  r.feasible = std::isfinite(best);
  return r;
}

OperatingPoint baseline_config(Baseline kind, GridShape grid) {
  if (grid.cells() == 0)
    throw DomainError("configuration grid must not be empty");
  const std::size_t top = grid.dvfs_levels - 1;
  const std::size_t fastest = grid.speed_levels - 1;
  switch (kind) {
  case Baseline::HS:
    return {top, fastest};
  case Baseline::AS:
    return {top, grid.speed_levels / 2};
  case Baseline::AS_star:
    return {grid.dvfs_levels / 2, grid.speed_levels / 2};
  }
  return {top, fastest};
}

const char *to_string(Baseline kind) noexcept {
  switch (kind) {
  case Baseline::HS:
    return "hs";
  case Baseline::AS:
    return "as";
  case Baseline::AS_star:
    return "as-star";
  }
  return "?";
}

const char *to_string(Neighborhood hood) noexcept {
  return hood == Neighborhood::Moore8 ? "moore8" : "vonneumann4";
}

Controller::Controller(const AppProfile &app, const SpeedLadder &speeds, std::size_t dvfs_levels,
                       ControllerParams params)
    : speeds_(speeds), dvfs_levels_(dvfs_levels), params_(params),
      state_(initial_state(app, {dvfs_levels, speeds.size()})) {
  params_.validate();
}

OperatingPoint Controller::tick(const Measurements &m, double clock_s) {
  TickOutput out = on_tick(state_, m, params_, speeds_, dvfs_levels_, clock_s);
  state_ = std::move(out.state);
  log_.insert(log_.end(), out.decisions.begin(), out.decisions.end());
  return out.actuation;
}

} // namespace pmusim
