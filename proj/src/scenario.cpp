// SPDX-License-Identifier: Apache-2.0
#include "pmusim/scenario.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "numfmt.hpp"
#include "pmusim/error.hpp"

namespace pmusim {

using detail::format_double;
using detail::parse_double;
using detail::parse_index;
using detail::trim;

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

// Scalar keys of one section; repeated keys are collected separately.
class Section {
public:
  Section(std::string kind, std::string label, std::size_t line)
      : kind_(std::move(kind)), label_(std::move(label)), line_(line) {}

  const std::string &kind() const { return kind_; }
  const std::string &label() const { return label_; }
  std::size_t line() const { return line_; }

  void add(std::string key, Entry e, const std::set<std::string> &scalar_keys,
           const std::set<std::string> &row_keys) {
    if (row_keys.contains(key)) {
      rows_.push_back({std::move(key), std::move(e)});
      return;
    }
    if (!scalar_keys.contains(key))
      throw ConfigError("unknown key in [" + kind_ + "]", e.line, key);
    if (scalars_.contains(key))
      throw ConfigError("duplicate key", e.line, key);
    scalars_.emplace(std::move(key), std::move(e));
  }

  bool has(const std::string &key) const { return scalars_.contains(key); }

  double number(const std::string &key) const {
    auto it = scalars_.find(key);
    if (it == scalars_.end())
      throw ConfigError("missing required key in [" + kind_ + "]", line_, key);
    return to_number(it->second, key);
  }

  double number_or(const std::string &key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  const Entry *text(const std::string &key) const {
    auto it = scalars_.find(key);
    return it == scalars_.end() ? nullptr : &it->second;
  }

  const std::vector<std::pair<std::string, Entry>> &rows() const { return rows_; }

  static double to_number(const Entry &e, const std::string &key) {
    auto x = parse_double(e.value);
    if (!x || !std::isfinite(*x))
      throw ConfigError("expected a finite number, got '" + e.value + "'", e.line, key);
    return *x;
  }

  static std::vector<double> to_numbers(const Entry &e, const std::string &key, std::size_t n) {
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string tok;
    while (in >> tok)
      out.push_back(to_number({tok, e.line}, key));
    if (out.size() != n)
      throw ConfigError("expected " + std::to_string(n) + " numbers, got " +
                            std::to_string(out.size()),
                        e.line, key);
    return out;
  }

private:
  std::string kind_;
  std::string label_;
  std::size_t line_;
  std::map<std::string, Entry> scalars_;
  std::vector<std::pair<std::string, Entry>> rows_;
};

struct SectionSpec {
  std::set<std::string> scalars;
  std::set<std::string> rows;
  bool labelled = false;
};

const std::map<std::string, SectionSpec> &section_specs() {
  static const std::map<std::string, SectionSpec> specs = {
      {"", {{"format", "name"}, {}, false}},
      {"motor", {{"p_idle_w", "c_lin_w_per_mps", "c_cube_w_per_mps3"}, {}, false}},
      {"cpu",
       {{"p_static_w_per_v", "switch_j_per_v2_cycle", "idle_utilization_floor", "effective_ipc"},
        {},
        false}},
      {"events", {{"base_rate_eps", "gain_eps_per_entropy_mps", "sensor_cap_eps"}, {}, false}},
      {"dvfs", {{}, {"level"}, false}},
      {"speeds", {{}, {"speed_mps"}, false}},
      {"app", {{"cycles_per_event", "required_throughput"}, {}, true}},
      {"environment", {{}, {"segment"}, true}},
      {"controller",
       {{"entropy_threshold", "energy_threshold_rel", "energy_threshold_jpm", "settle_time_s",
         "neighborhood"},
        {},
        false}},
      {"run", {{"dt_s", "mode", "app", "environment", "max_ticks"}, {}, false}},
  };
  return specs;
}

bool valid_name(std::string_view s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
      return false;
  return true;
}

std::vector<Section> tokenize(std::string_view text) {
  std::vector<Section> sections;
  sections.emplace_back("", "", 1);
  std::set<std::string> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section header", line_no);
      std::string_view inner = trim(line.substr(1, line.size() - 2));
      const auto space = inner.find_first_of(" \t");
      const std::string kind(inner.substr(0, space));
      const std::string label(space == std::string_view::npos ? std::string_view{}
                                                              : trim(inner.substr(space)));
      const auto spec = section_specs().find(kind);
      if (kind.empty() || spec == section_specs().end())
        throw ConfigError("unknown section [" + std::string(inner) + "]", line_no);
      if (spec->second.labelled && !valid_name(label))
        throw ConfigError("[" + kind + "] needs a name made of [A-Za-z0-9_.-]", line_no);
      if (!spec->second.labelled && !label.empty())
        throw ConfigError("[" + kind + "] takes no name", line_no);
      if (!seen.insert(kind + " " + label).second)
        throw ConfigError("duplicate section [" + std::string(inner) + "]", line_no);
      sections.emplace_back(kind, label, line_no);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty())
      throw ConfigError("empty key", line_no);
    if (value.empty())
      throw ConfigError("empty value", line_no, key);
    Section &cur = sections.back();
    const SectionSpec &spec = section_specs().at(cur.kind());
    cur.add(key, {value, line_no}, spec.scalars, spec.rows);
  }
  return sections;
}

template <class F>
auto at_section(const Section &s, F &&f) {
  try {
    return f();
  } catch (const DomainError &e) {
    throw ConfigError(e.what(), s.line(), s.kind());
  }
}

Neighborhood parse_neighborhood(const Entry &e) {
  if (e.value == "moore8")
    return Neighborhood::Moore8;
  if (e.value == "vonneumann4")
    return Neighborhood::VonNeumann4;
  throw ConfigError("expected moore8 or vonneumann4, got '" + e.value + "'", e.line,
                    "neighborhood");
}

} // namespace

const AppProfile &Scenario::selected_app() const {
  if (apps.empty())
    throw ConfigError("scenario has no applications");
  if (run_app.empty())
    return apps.front();
  for (const auto &a : apps)
    if (a.name == run_app)
      return a;
  throw ConfigError("unknown application '" + run_app + "'", 0, "app");
}

const EnvironmentProfile &Scenario::selected_environment() const {
  if (environments.empty())
    throw ConfigError("scenario has no environments");
  if (run_environment.empty())
    return environments.front();
  for (const auto &e : environments)
    if (e.name == run_environment)
      return e;
  throw ConfigError("unknown environment '" + run_environment + "'", 0, "environment");
}

SimConfig Scenario::sim_config() const {
  SimConfig cfg;
  cfg.dt_s = dt_s;
  cfg.environment = selected_environment();
  cfg.app = selected_app();
  cfg.models = models;
  cfg.controller = controller;
  cfg.mode = mode;
  cfg.max_ticks = max_ticks;
  return cfg;
}

RunMode parse_mode(std::string_view text, GridShape grid) {
  if (text == "controlled")
    return RunMode::controlled();
  if (text == "hs")
    return RunMode::fixed_at(baseline_config(Baseline::HS, grid));
  if (text == "as")
    return RunMode::fixed_at(baseline_config(Baseline::AS, grid));
  if (text == "as-star")
    return RunMode::fixed_at(baseline_config(Baseline::AS_star, grid));
  if (text.starts_with("fixed:")) {
    const std::string_view rest = text.substr(6);
    const auto comma = rest.find(',');
    if (comma != std::string_view::npos) {
      const auto i = parse_index(trim(rest.substr(0, comma)));
      const auto j = parse_index(trim(rest.substr(comma + 1)));
      if (i && j) {
        const OperatingPoint p{*i, *j};
        if (!p.within(grid))
          throw ConfigError("fixed operating point outside the grid", 0, "mode");
        return RunMode::fixed_at(p);
      }
    }
  }
  throw ConfigError("expected controlled, hs, as, as-star or fixed:I,J, got '" +
                        std::string(text) + "'",
                    0, "mode");
}

std::string format_mode(const RunMode &mode) {
  if (mode.kind == RunMode::Kind::Controlled)
    return "controlled";
  return "fixed:" + std::to_string(mode.fixed.dvfs_index) + "," +
         std::to_string(mode.fixed.speed_index);
}

Scenario parse_scenario(std::string_view text) {
  const std::vector<Section> sections = tokenize(text);
  Scenario sc;

  const Section &top = sections.front();
  const Entry *format = top.text("format");
  if (!format)
    throw ConfigError("missing format line ('format = " + std::string(kScenarioFormat) + "')", 1,
                      "format");
  if (format->value != kScenarioFormat)
    throw ConfigError("unsupported format '" + format->value + "'", format->line, "format");
  if (const Entry *name = top.text("name"))
    sc.name = name->value;

  const Section *motor = nullptr, *cpu = nullptr, *events = nullptr, *dvfs = nullptr,
                *speeds = nullptr, *controller = nullptr, *run = nullptr;
  for (const Section &s : sections) {
    const std::string &k = s.kind();
    if (k == "motor")
      motor = &s;
    else if (k == "cpu")
      cpu = &s;
    else if (k == "events")
      events = &s;
    else if (k == "dvfs")
      dvfs = &s;
    else if (k == "speeds")
      speeds = &s;
    else if (k == "controller")
      controller = &s;
    else if (k == "run")
      run = &s;
    else if (k == "app") {
      AppProfile app;
      app.name = s.label();
      app.cycles_per_event = s.number("cycles_per_event");
      app.required_throughput = s.number_or("required_throughput", 1.0);
      at_section(s, [&] { app.validate(); return 0; });
      sc.apps.push_back(std::move(app));
    } else if (k == "environment") {
      EnvironmentProfile env;
      env.name = s.label();
      for (const auto &[key, e] : s.rows()) {
        const auto v = Section::to_numbers(e, key, 2);
        env.segments.push_back({v[0], v[1]});
      }
      at_section(s, [&] { env.validate(); return 0; });
      sc.environments.push_back(std::move(env));
    }
  }

  auto required = [](const Section *s, const char *kind) -> const Section & {
    if (!s)
      throw ConfigError(std::string("missing section [") + kind + "]");
    return *s;
  };

  const Section &m = required(motor, "motor");
  sc.models.motor = {m.number("p_idle_w"), m.number("c_lin_w_per_mps"),
                     m.number("c_cube_w_per_mps3")};
  at_section(m, [&] { sc.models.motor.validate(); return 0; });

  const Section &c = required(cpu, "cpu");
  sc.models.cpu = {c.number("p_static_w_per_v"), c.number("switch_j_per_v2_cycle"),
                   c.number("idle_utilization_floor"), c.number("effective_ipc")};
  at_section(c, [&] { sc.models.cpu.validate(); return 0; });

  const Section &ev = required(events, "events");
  sc.models.events = {ev.number("base_rate_eps"), ev.number("gain_eps_per_entropy_mps"),
                      ev.number_or("sensor_cap_eps", 1.0e7)};
  at_section(ev, [&] { sc.models.events.validate(); return 0; });

  const Section &d = required(dvfs, "dvfs");
  std::vector<DvfsLevel> levels;
  for (const auto &[key, e] : d.rows()) {
    const auto v = Section::to_numbers(e, key, 2);
    levels.push_back({v[0], v[1]});
  }
  sc.models.dvfs = at_section(d, [&] { return DvfsTable(std::move(levels)); });

  const Section &sp = required(speeds, "speeds");
  std::vector<double> ladder;
  for (const auto &[key, e] : sp.rows())
    ladder.push_back(Section::to_number(e, key));
  sc.models.speeds = at_section(sp, [&] { return SpeedLadder(std::move(ladder)); });

  if (sc.apps.empty())
    throw ConfigError("scenario needs at least one [app NAME] section");
  if (sc.environments.empty())
    throw ConfigError("scenario needs at least one [environment NAME] section");

  if (controller) {
    const Section &s = *controller;
    ControllerParams &p = sc.controller;
    p.entropy_threshold = s.number_or("entropy_threshold", p.entropy_threshold);
    p.settle_time_s = s.number_or("settle_time_s", p.settle_time_s);
    if (s.has("energy_threshold_rel") && s.has("energy_threshold_jpm"))
      throw ConfigError("give only one of energy_threshold_rel and energy_threshold_jpm",
                        s.text("energy_threshold_jpm")->line, "energy_threshold_jpm");
    if (s.has("energy_threshold_rel"))
      p.energy_threshold = {s.number("energy_threshold_rel"), true};
    if (s.has("energy_threshold_jpm"))
      p.energy_threshold = {s.number("energy_threshold_jpm"), false};
    if (const Entry *n = s.text("neighborhood"))
      p.neighborhood = parse_neighborhood(*n);
    at_section(s, [&] { p.validate(); return 0; });
  }

  if (run) {
    const Section &s = *run;
    sc.dt_s = s.number_or("dt_s", sc.dt_s);
    if (const Entry *e = s.text("max_ticks")) {
      const auto n = parse_index(e->value);
      if (!n)
        throw ConfigError("expected a non-negative integer", e->line, "max_ticks");
      sc.max_ticks = *n;
    }
    if (const Entry *e = s.text("app"))
      sc.run_app = e->value;
    if (const Entry *e = s.text("environment"))
      sc.run_environment = e->value;
    if (const Entry *e = s.text("mode")) {
      try {
        sc.mode = parse_mode(e->value, sc.models.shape());
      } catch (const ConfigError &err) {
        throw ConfigError(err.what(), e->line);
      }
    }
  }

  std::set<std::string> names;
  for (const auto &a : sc.apps)
    if (!names.insert(a.name).second)
      throw ConfigError("duplicate application '" + a.name + "'");
  names.clear();
  for (const auto &e : sc.environments)
    if (!names.insert(e.name).second)
      throw ConfigError("duplicate environment '" + e.name + "'");

  const std::size_t run_line = run ? run->line() : 0;
  try {
    (void)sc.selected_app();
    (void)sc.selected_environment();
    sc.sim_config().validate();
  } catch (const DomainError &e) {
    throw ConfigError(e.what(), run_line, "run");
  } catch (const ConfigError &e) {
    throw ConfigError(e.what(), run_line);
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ConfigError &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario &sc) {
  std::ostringstream o;
  auto num = [](double x) { return format_double(x); };
  o << "# pmusim scenario\n";
  o << "format = " << kScenarioFormat << "\n";
  if (!sc.name.empty())
    o << "name = " << sc.name << "\n";

  const PlantModels &m = sc.models;
  o << "\n[motor]\n";
  o << "p_idle_w = " << num(m.motor.p_idle_w) << "\n";
  o << "c_lin_w_per_mps = " << num(m.motor.c_lin_w_per_mps) << "\n";
  o << "c_cube_w_per_mps3 = " << num(m.motor.c_cube_w_per_mps3) << "\n";

  o << "\n[cpu]\n";
  o << "p_static_w_per_v = " << num(m.cpu.p_static_w_per_v) << "\n";
  o << "switch_j_per_v2_cycle = " << num(m.cpu.switch_j_per_v2_cycle) << "\n";
  o << "idle_utilization_floor = " << num(m.cpu.idle_utilization_floor) << "\n";
  o << "effective_ipc = " << num(m.cpu.effective_ipc) << "\n";

  o << "\n[events]\n";
  o << "base_rate_eps = " << num(m.events.base_rate_eps) << "\n";
  o << "gain_eps_per_entropy_mps = " << num(m.events.gain_eps_per_entropy_mps) << "\n";
  o << "sensor_cap_eps = " << num(m.events.sensor_cap_eps) << "\n";

  o << "\n[dvfs]\n# frequency_hz voltage_v\n";
  for (const auto &l : m.dvfs.levels())
    o << "level = " << num(l.frequency_hz) << " " << num(l.voltage_v) << "\n";

  o << "\n[speeds]\n";
  for (double v : m.speeds.speeds())
    o << "speed_mps = " << num(v) << "\n";

  for (const auto &a : sc.apps) {
    o << "\n[app " << a.name << "]\n";
    o << "cycles_per_event = " << num(a.cycles_per_event) << "\n";
    o << "required_throughput = " << num(a.required_throughput) << "\n";
  }

  for (const auto &e : sc.environments) {
    o << "\n[environment " << e.name << "]\n# length_m entropy\n";
    for (const auto &s : e.segments)
      o << "segment = " << num(s.length_m) << " " << num(s.entropy) << "\n";
  }

  const ControllerParams &p = sc.controller;
  o << "\n[controller]\n";
  o << "entropy_threshold = " << num(p.entropy_threshold) << "\n";
  o << (p.energy_threshold.relative ? "energy_threshold_rel = " : "energy_threshold_jpm = ")
    << num(p.energy_threshold.value) << "\n";
  o << "settle_time_s = " << num(p.settle_time_s) << "\n";
  o << "neighborhood = " << to_string(p.neighborhood) << "\n";

  o << "\n[run]\n";
  o << "dt_s = " << num(sc.dt_s) << "\n";
  o << "mode = " << format_mode(sc.mode) << "\n";
  if (!sc.run_app.empty())
    o << "app = " << sc.run_app << "\n";
  if (!sc.run_environment.empty())
    o << "environment = " << sc.run_environment << "\n";
  o << "max_ticks = " << sc.max_ticks << "\n";
  return o.str();
}

namespace defaults {

namespace {

Scenario base(std::string name) {
  Scenario sc;
  sc.name = std::move(name);
  sc.models = models();
  sc.apps = apps();
  return sc;
}

Scenario single(std::string name, double entropy) {
  Scenario sc = base(name);
  sc.environments.push_back({std::move(name), {{100.0, entropy}}});
  return sc;
}

} // namespace

Scenario low() { return single("low", low_entropy()); }
Scenario medium() { return single("medium", medium_entropy()); }
Scenario high() { return single("high", high_entropy()); }

Scenario suite() {
  Scenario sc = base("suite");
  sc.environments = {low().environments.front(), medium().environments.front(),
                     high().environments.front()};
  return sc;
}

Scenario mixed() {
  Scenario sc = base("mixed");
  sc.environments.push_back(
      {"mixed", {{100.0, high_entropy()}, {100.0, medium_entropy()}, {100.0, low_entropy()}}});
  return sc;
}

} // namespace defaults

} // namespace pmusim
