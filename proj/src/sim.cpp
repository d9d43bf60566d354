// SPDX-License-Identifier: Apache-2.0
#include "pmusim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pmusim/error.hpp"

namespace pmusim {

void SimConfig::validate() const {
  if (!(std::isfinite(dt_s) && dt_s > 0.0))
    throw DomainError("dt must be > 0");
  controller.validate();
  if (dt_s > controller.settle_time_s / 5.0)
    throw DomainError("dt must not exceed settle_time / 5");
  environment.validate();
  app.validate();
  models.validate();
  if (mode.kind == RunMode::Kind::Fixed && !mode.fixed.within(models.shape()))
    throw DomainError("fixed operating point outside the configuration grid");
}

namespace {

// Compensated running sum; positions accumulate millions of small steps.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;

  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  void reset(double value) {
    sum = value;
    c = 0.0;
  }
};

std::vector<EnergyReport> split_by_segment(const std::vector<TraceSample> &trace,
                                           const EnvironmentProfile &env) {
  std::vector<EnergyReport> out;
  std::size_t begin = 0;
  for (std::size_t seg = 0; seg < env.segments.size() && begin + 1 < trace.size(); ++seg) {
    const double end_pos = env.segment_end(seg);
    std::size_t end = begin + 1;
    while (end + 1 < trace.size() && trace[end].position_m < end_pos)
      ++end;
    out.push_back(integrate_energy(std::span(trace).subspan(begin, end - begin + 1)));
    begin = end;
  }
  return out;
}

void finalize(MissionResult &r, const EnvironmentProfile &env) {
  r.report = integrate_energy(r.trace);
  r.segment_reports = split_by_segment(r.trace, env);
  for (const auto &d : r.decisions) {
    if (d.event == "converged" && !r.first_convergence_s)
      r.first_convergence_s = d.time_s;
    if (d.event == "degraded")
      r.degraded = true;
  }
}

} // namespace

MissionResult run_mission(const SimConfig &cfg) {
  cfg.validate();
  const EnvironmentProfile &env = cfg.environment;
  const PlantModels &models = cfg.models;
  const double total = env.total_length();
  const double snap = 1e-9 * std::max(1.0, total);
  const bool controlled = cfg.mode.kind == RunMode::Kind::Controlled;

  const std::size_t max_ticks =
      cfg.max_ticks > 0
          ? cfg.max_ticks
          : 2 * static_cast<std::size_t>(std::ceil(total / (models.speeds[0] * cfg.dt_s))) +
                4 * env.segments.size() + 16;

  ControllerState cs = initial_state(cfg.app, models.shape());
  OperatingPoint applied = controlled ? cs.actuation : cfg.mode.fixed;

  MissionResult r;
  r.trace.reserve(static_cast<std::size_t>(total / (models.speeds[0] * cfg.dt_s)) / 4 + 16);

  KahanSum pos;
  double t_anchor = 0.0;    // time of the last clipped step
  std::size_t regular = 0;  // regular dt steps since t_anchor
  std::size_t ticks = 0;

  for (;;) {
    const std::size_t seg = env.segment_index_at(pos.sum);
    const double entropy = env.segments[seg].entropy;
    const PlantState ps = evaluate_plant(models, cfg.app, applied, entropy);
    const double t = t_anchor + static_cast<double>(regular) * cfg.dt_s;

    r.trace.push_back({t, pos.sum, ps.speed_mps, applied.dvfs_index, ps.p_motor_w, ps.p_cpu_w,
                       ps.throughput, entropy, ps.event_rate_eps});
    r.settled.push_back(!controlled ||
                        (cs.phase != Phase::Climbing && !cs.degraded && applied == cs.current &&
                         std::abs(entropy - cs.tracked_entropy) <= cfg.controller.entropy_threshold));

    if (pos.sum >= total - snap)
      break;
    if (++ticks > max_ticks) {
      r.final_point = controlled ? cs.current : applied;
      if (r.trace.size() >= 2)
        finalize(r, env);
      throw MissionTimeout("mission did not finish within " + std::to_string(max_ticks) + " ticks",
                           std::move(r));
    }

    OperatingPoint next = applied;
    if (controlled) {
      TickOutput out = on_tick(cs, measure(ps, cfg.app, entropy), cfg.controller, models.speeds,
                               models.dvfs.size(), t);
      cs = std::move(out.state);
      next = out.actuation;
      r.decisions.insert(r.decisions.end(), out.decisions.begin(), out.decisions.end());
    }

    // Advance at the speed that was in force during this tick.
    const double boundary = std::min(env.segment_end(seg), total);
    const double step = ps.speed_mps * cfg.dt_s;
    const double remaining = boundary - pos.sum;
    if (step >= remaining - snap) {
      if (std::abs(step - remaining) <= snap) {
        ++regular;
      } else {
        t_anchor = t + remaining / ps.speed_mps;
        regular = 0;
      }
      pos.reset(boundary);
    } else {
      pos.add(step);
      ++regular;
    }
    applied = next;
  }

  r.final_point = controlled ? cs.current : applied;
  finalize(r, env);
  return r;
}

const SweepCell &SweepGrid::at(std::size_t dvfs_index, std::size_t speed_index) const {
  if (dvfs_index >= shape.dvfs_levels || speed_index >= shape.speed_levels)
    throw DomainError("sweep cell outside the grid");
  return cells[dvfs_index * shape.speed_levels + speed_index];
}

std::optional<double> SweepGrid::j_per_m(std::size_t dvfs_index, std::size_t speed_index) const {
  const auto &cell = at(dvfs_index, speed_index);
  if (!cell.energy_j)
    return std::nullopt;
  return *cell.energy_j / distance_m;
}

SweepGrid sweep(double entropy, double distance_m, const PlantModels &models,
                const AppProfile &app) {
  if (!(entropy >= 0.0))
    throw DomainError("sweep: entropy must be >= 0");
  if (!(distance_m > 0.0))
    throw DomainError("sweep: distance must be > 0");
  models.validate();
  SweepGrid g;
  g.shape = models.shape();
  g.entropy = entropy;
  g.distance_m = distance_m;
  for (const auto &l : models.dvfs.levels())
    g.frequencies_hz.push_back(l.frequency_hz);
  g.speeds_mps.assign(models.speeds.speeds().begin(), models.speeds.speeds().end());
  g.cells.reserve(g.shape.cells());
  const Segment trip{distance_m, entropy};
  for (std::size_t i = 0; i < g.shape.dvfs_levels; ++i) {
    for (std::size_t j = 0; j < g.shape.speed_levels; ++j) {
      SweepCell cell;
      cell.point = {i, j};
      cell.throughput = evaluate_plant(models, app, cell.point, entropy).throughput;
      if (cell.throughput == 1.0)
        cell.energy_j = steady_state_mission_energy(cell.point, trip, models, app).e_total_j;
      g.cells.push_back(cell);
    }
  }
  return g;
}

std::vector<FrontierPoint> frontier(const SweepGrid &grid) {
  std::vector<FrontierPoint> out;
  for (std::size_t j = 0; j < grid.shape.speed_levels; ++j) {
    for (std::size_t i = 0; i < grid.shape.dvfs_levels; ++i) {
      if (auto jpm = grid.j_per_m(i, j)) {
        out.push_back({j, i, grid.speeds_mps[j], grid.frequencies_hz[i], *jpm});
        break;
      }
    }
  }
  return out;
}

std::optional<std::size_t> frontier_argmin(const std::vector<FrontierPoint> &points) {
  if (points.empty())
    return std::nullopt;
  std::size_t best = 0;
  for (std::size_t k = 1; k < points.size(); ++k)
    if (points[k].j_per_m < points[best].j_per_m)
      best = k;
  return best;
}

std::optional<OperatingPoint> sweep_argmin(const SweepGrid &grid) {
  std::optional<OperatingPoint> best;
  double best_cost = 0.0;
  for (const auto &cell : grid.cells) {
    if (!cell.energy_j)
      continue;
    const double c = *cell.energy_j / grid.distance_m;
    if (!best || c < best_cost) {
      best = cell.point;
      best_cost = c;
    }
  }
  return best;
}

const char *to_string(CompareMode mode) noexcept {
  switch (mode) {
  case CompareMode::Controlled:
    return "controlled";
  case CompareMode::HS:
    return "hs";
  case CompareMode::AS:
    return "as";
  case CompareMode::AS_star:
    return "as-star";
  }
  return "?";
}

std::vector<ComparisonRow> compare(const SimConfig &base,
                                   const std::vector<EnvironmentProfile> &environments,
                                   const std::vector<AppProfile> &apps, unsigned threads) {
  constexpr CompareMode kModes[] = {CompareMode::Controlled, CompareMode::HS, CompareMode::AS,
                                    CompareMode::AS_star};
  const GridShape grid = base.models.shape();

  std::vector<SimConfig> jobs;
  std::vector<ComparisonRow> rows;
  for (const auto &env : environments) {
    for (const auto &app : apps) {
      for (CompareMode mode : kModes) {
        SimConfig cfg = base;
        cfg.environment = env;
        cfg.app = app;
        switch (mode) {
        case CompareMode::Controlled:
          cfg.mode = RunMode::controlled();
          break;
        case CompareMode::HS:
          cfg.mode = RunMode::fixed_at(baseline_config(Baseline::HS, grid));
          break;
        case CompareMode::AS:
          cfg.mode = RunMode::fixed_at(baseline_config(Baseline::AS, grid));
          break;
        case CompareMode::AS_star:
          cfg.mode = RunMode::fixed_at(baseline_config(Baseline::AS_star, grid));
          break;
        }
        jobs.push_back(std::move(cfg));
        rows.push_back({env.name, app.name, mode, {}, {}, 0.0});
      }
    }
  }

  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      try {
        MissionResult m = run_mission(jobs[k]);
        rows[k].report = m.report;
        rows[k].final_point = m.final_point;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back(worker);
  }
  if (failure)
    std::rethrow_exception(failure);

  for (std::size_t k = 0; k < rows.size(); k += std::size(kModes)) {
    const double ctrl = rows[k].report.j_per_m;
    for (std::size_t m = 0; m < std::size(kModes); ++m)
      rows[k + m].controlled_savings = 1.0 - ctrl / rows[k + m].report.j_per_m;
  }
  return rows;
}

} // namespace pmusim
