// SPDX-License-Identifier: Apache-2.0
#pragma once

// Machine-readable and visual outputs. Every CSV starts with one versioned
// comment line ("# pmusim-grid/1 key=value ...") followed by a column header.
// Numbers use shortest round-trip formatting, independent of the locale.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmusim/controller.hpp"
#include "pmusim/energy.hpp"
#include "pmusim/sim.hpp"

namespace pmusim {

inline constexpr std::string_view kGridFormat = "pmusim-grid/1";
inline constexpr std::string_view kFrontierFormat = "pmusim-frontier/1";
inline constexpr std::string_view kTraceFormat = "pmusim-trace/1";
inline constexpr std::string_view kDecisionsFormat = "pmusim-decisions/1";
inline constexpr std::string_view kCompareFormat = "pmusim-compare/1";

void write_grid_csv(std::ostream &out, const SweepGrid &grid, std::string_view app);
/// Inverse of write_grid_csv. Throws ConfigError with the offending line.
SweepGrid read_grid_csv(std::istream &in);

/// `argmin` flags one row; pass frontier_argmin(points).
void write_frontier_csv(std::ostream &out, const std::vector<FrontierPoint> &points,
                        std::optional<std::size_t> argmin, double entropy);

void write_trace_csv(std::ostream &out, const std::vector<TraceSample> &trace);
void write_decisions_csv(std::ostream &out, const std::vector<DecisionRecord> &decisions);

/// `key = value` lines.
void write_report(std::ostream &out, const MissionResult &result, std::string_view mode);

void write_compare_csv(std::ostream &out, const std::vector<ComparisonRow> &rows);

/// Heatmap of the sweep: DVFS frequency on x, speed on y, cells colored by
/// throughput on an 8-step ramp, energy printed on feasible cells.
void write_grid_svg(std::ostream &out, const SweepGrid &grid, std::string_view title);

} // namespace pmusim
