// SPDX-License-Identifier: Apache-2.0
#include "pmusim/output.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "numfmt.hpp"
#include "pmusim/error.hpp"

namespace pmusim {

using detail::format_double;
using detail::parse_double;
using detail::parse_index;
using detail::trim;

namespace {

std::string num(double x) { return format_double(x); }

std::string opt(const std::optional<double> &x) { return x ? num(*x) : std::string(); }

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto p = line.find(sep);
    out.push_back(line.substr(0, p));
    if (p == std::string_view::npos)
      return out;
    line.remove_prefix(p + 1);
  }
}

// "# fmt k=v k=v" -> {k: v}
std::map<std::string, std::string> parse_preamble(std::string_view line, std::string_view fmt) {
  if (!line.starts_with("# "))
    throw ConfigError("missing '# " + std::string(fmt) + "' header", 1);
  auto words = split(trim(line.substr(2)), ' ');
  if (words.empty() || words.front() != fmt)
    throw ConfigError("expected format " + std::string(fmt), 1);
  std::map<std::string, std::string> kv;
  for (std::size_t k = 1; k < words.size(); ++k) {
    if (words[k].empty())
      continue;
    const auto eq = words[k].find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("malformed header field '" + std::string(words[k]) + "'", 1);
    kv.emplace(words[k].substr(0, eq), words[k].substr(eq + 1));
  }
  return kv;
}

double header_number(const std::map<std::string, std::string> &kv, const std::string &key) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw ConfigError("missing header field", 1, key);
  auto x = parse_double(it->second);
  if (!x)
    throw ConfigError("expected a number, got '" + it->second + "'", 1, key);
  return *x;
}

// Four significant digits for labels.
std::string label(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 4);
  return std::string(buf, res.ptr);
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace

void write_grid_csv(std::ostream &out, const SweepGrid &grid, std::string_view app) {
  out << "# " << kGridFormat << " entropy=" << num(grid.entropy)
      << " distance_m=" << num(grid.distance_m) << " app=" << app << "\n";
  out << "dvfs_index,frequency_hz,speed_index,speed_mps,throughput,energy_j\n";
  for (const auto &c : grid.cells) {
    out << c.point.dvfs_index << ',' << num(grid.frequencies_hz[c.point.dvfs_index]) << ','
        << c.point.speed_index << ',' << num(grid.speeds_mps[c.point.speed_index]) << ','
        << num(c.throughput) << ',' << opt(c.energy_j) << "\n";
  }
}

SweepGrid read_grid_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("empty grid file");
  const auto kv = parse_preamble(line, kGridFormat);
  SweepGrid g;
  g.entropy = header_number(kv, "entropy");
  g.distance_m = header_number(kv, "distance_m");
  if (!(g.distance_m > 0.0))
    throw ConfigError("distance must be > 0", 1, "distance_m");

  if (!std::getline(in, line) ||
      trim(line) != "dvfs_index,frequency_hz,speed_index,speed_mps,throughput,energy_j")
    throw ConfigError("unexpected column header", 2);

  std::map<std::size_t, double> freqs, speeds;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 6)
      throw ConfigError("expected 6 fields", line_no);
    const auto i = parse_index(f[0]);
    const auto fr = parse_double(f[1]);
    const auto j = parse_index(f[2]);
    const auto sp = parse_double(f[3]);
    const auto thr = parse_double(f[4]);
    if (!i || !fr || !j || !sp || !thr)
      throw ConfigError("malformed number", line_no);
    SweepCell cell{{*i, *j}, *thr, std::nullopt};
    if (!f[5].empty()) {
      const auto e = parse_double(f[5]);
      if (!e)
        throw ConfigError("malformed energy", line_no, "energy_j");
      cell.energy_j = *e;
    }
    if ((freqs.contains(*i) && freqs[*i] != *fr) || (speeds.contains(*j) && speeds[*j] != *sp))
      throw ConfigError("inconsistent frequency or speed for an index", line_no);
    freqs[*i] = *fr;
    speeds[*j] = *sp;
    g.cells.push_back(cell);
  }

  g.shape = {freqs.size(), speeds.size()};
  if (g.cells.empty() || g.cells.size() != g.shape.cells())
    throw ConfigError("grid rows do not cover a full rectangular grid");
  for (std::size_t k = 0; k < g.cells.size(); ++k) {
    const OperatingPoint want{k / g.shape.speed_levels, k % g.shape.speed_levels};
    if (g.cells[k].point != want)
      throw ConfigError("grid rows out of order", k + 3);
  }
  for (const auto &[i, f] : freqs)
    g.frequencies_hz.push_back(f);
  for (const auto &[j, s] : speeds)
    g.speeds_mps.push_back(s);
  return g;
}

void write_frontier_csv(std::ostream &out, const std::vector<FrontierPoint> &points,
                        std::optional<std::size_t> argmin, double entropy) {
  out << "# " << kFrontierFormat << " entropy=" << num(entropy) << "\n";
  out << "speed_mps,min_frequency_hz,j_per_m,is_argmin\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto &p = points[k];
    out << num(p.speed_mps) << ',' << num(p.frequency_hz) << ',' << num(p.j_per_m) << ','
        << (argmin && *argmin == k ? 1 : 0) << "\n";
  }
}

void write_trace_csv(std::ostream &out, const std::vector<TraceSample> &trace) {
  out << "# " << kTraceFormat << "\n";
  out << "time_s,position_m,speed_mps,dvfs_index,p_motor_w,p_cpu_w,throughput,entropy,"
         "event_rate_eps\n";
  for (const auto &s : trace) {
    out << num(s.time_s) << ',' << num(s.position_m) << ',' << num(s.speed_mps) << ','
        << s.dvfs_index << ',' << num(s.p_motor_w) << ',' << num(s.p_cpu_w) << ','
        << num(s.throughput) << ',' << num(s.entropy) << ',' << num(s.event_rate_eps) << "\n";
  }
}

void write_decisions_csv(std::ostream &out, const std::vector<DecisionRecord> &decisions) {
  out << "# " << kDecisionsFormat << "\n";
  out << "time_s,event,from_dvfs,from_speed,to_dvfs,to_speed,cost_jpm,feasible\n";
  for (const auto &d : decisions) {
    out << num(d.time_s) << ',' << d.event << ',' << d.from.dvfs_index << ','
        << d.from.speed_index << ',' << d.to.dvfs_index << ',' << d.to.speed_index << ','
        << (std::isnan(d.cost_jpm) ? std::string() : num(d.cost_jpm)) << ','
        << (d.feasible ? 1 : 0) << "\n";
  }
}

void write_report(std::ostream &out, const MissionResult &r, std::string_view mode) {
  const EnergyReport &e = r.report;
  out << "mode = " << mode << "\n";
  out << "e_total_j = " << num(e.e_total_j) << "\n";
  out << "e_motor_j = " << num(e.e_motor_j) << "\n";
  out << "e_cpu_j = " << num(e.e_cpu_j) << "\n";
  out << "j_per_m = " << num(e.j_per_m) << "\n";
  out << "duration_s = " << num(e.duration_s) << "\n";
  out << "distance_m = " << num(e.distance_m) << "\n";
  out << "min_throughput = " << num(e.min_throughput) << "\n";
  out << "mean_throughput = " << num(e.mean_throughput) << "\n";
  out << "final_dvfs_index = " << r.final_point.dvfs_index << "\n";
  out << "final_speed_index = " << r.final_point.speed_index << "\n";
  out << "first_convergence_s = "
      << (r.first_convergence_s ? num(*r.first_convergence_s) : std::string("none")) << "\n";
  out << "degraded = " << (r.degraded ? "true" : "false") << "\n";
  out << "trace_samples = " << r.trace.size() << "\n";
  out << "decisions = " << r.decisions.size() << "\n";
  for (std::size_t k = 0; k < r.segment_reports.size(); ++k)
    out << "segment_" << k << "_j_per_m = " << num(r.segment_reports[k].j_per_m) << "\n";
}

void write_compare_csv(std::ostream &out, const std::vector<ComparisonRow> &rows) {
  out << "# " << kCompareFormat << "\n";
  out << "environment,app,mode,j_per_m,e_total_j,e_cpu_j,e_motor_j,mean_throughput,"
         "min_throughput,duration_s,final_dvfs_index,final_speed_index,controlled_savings\n";
  for (const auto &r : rows) {
    const EnergyReport &e = r.report;
    out << r.environment << ',' << r.app << ',' << to_string(r.mode) << ',' << num(e.j_per_m)
        << ',' << num(e.e_total_j) << ',' << num(e.e_cpu_j) << ',' << num(e.e_motor_j) << ','
        << num(e.mean_throughput) << ',' << num(e.min_throughput) << ',' << num(e.duration_s)
        << ',' << r.final_point.dvfs_index << ',' << r.final_point.speed_index << ','
        << num(r.controlled_savings) << "\n";
  }
}

void write_grid_svg(std::ostream &out, const SweepGrid &grid, std::string_view title) {
  // Eight samples of the viridis map, low throughput first.
  static constexpr std::array<const char *, 8> kRamp = {
      "#440154", "#46327e", "#365c8d", "#277f8e", "#1fa187", "#4ac16d", "#a0da39", "#fde725"};
  constexpr int kCellW = 64, kCellH = 36, kLeft = 80, kTop = 40, kBottom = 56, kLegend = 120;
  const int cols = static_cast<int>(grid.shape.dvfs_levels);
  const int rows = static_cast<int>(grid.shape.speed_levels);
  const int width = kLeft + cols * kCellW + kLegend;
  const int height = kTop + rows * kCellH + kBottom;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">" << xml_escape(title)
      << "</text>\n";

  for (const auto &c : grid.cells) {
    const int x = kLeft + static_cast<int>(c.point.dvfs_index) * kCellW;
    // Highest speed on top.
    const int y = kTop + (rows - 1 - static_cast<int>(c.point.speed_index)) * kCellH;
    const std::size_t bin =
        c.throughput >= 1.0 ? 7 : std::min<std::size_t>(6, static_cast<std::size_t>(c.throughput * 7.0));
    out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW << "\" height=\""
        << kCellH << "\" fill=\"" << kRamp[bin] << "\" stroke=\"white\"/>\n";
    if (c.energy_j) {
      out << "<text x=\"" << x + kCellW / 2 << "\" y=\"" << y + kCellH / 2 + 4
          << "\" text-anchor=\"middle\" fill=\"black\">" << label(*c.energy_j) << "</text>\n";
    }
  }

  for (int i = 0; i < cols; ++i) {
    out << "<text x=\"" << kLeft + i * kCellW + kCellW / 2 << "\" y=\""
        << kTop + rows * kCellH + 16 << "\" text-anchor=\"middle\">"
        << label(grid.frequencies_hz[static_cast<std::size_t>(i)] / 1e9) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + cols * kCellW / 2 << "\" y=\"" << kTop + rows * kCellH + 40
      << "\" text-anchor=\"middle\">CPU frequency (GHz)</text>\n";
  for (int j = 0; j < rows; ++j) {
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + (rows - 1 - j) * kCellH + kCellH / 2 + 4
        << "\" text-anchor=\"end\">" << label(grid.speeds_mps[static_cast<std::size_t>(j)])
        << "</text>\n";
  }
  out << "<text x=\"16\" y=\"" << kTop + rows * kCellH / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kTop + rows * kCellH / 2
      << ")\">speed (m/s)</text>\n";

  const int lx = kLeft + cols * kCellW + 24;
  out << "<text x=\"" << lx << "\" y=\"" << kTop - 6 << "\">throughput</text>\n";
  for (int k = 7; k >= 0; --k) {
    const int ly = kTop + (7 - k) * 20;
    const std::string range = k == 7 ? "1" : label(k / 7.0) + "-" + label((k + 1) / 7.0);
    out << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"16\" height=\"16\" fill=\""
        << kRamp[static_cast<std::size_t>(k)] << "\"/>\n";
    out << "<text x=\"" << lx + 22 << "\" y=\"" << ly + 12 << "\">" << range << "</text>\n";
  }
  out << "<text x=\"" << lx << "\" y=\"" << kTop + 8 * 20 + 14
      << "\">labels: trip energy (J)</text>\n";
  out << "</svg>\n";
}

} // namespace pmusim
