#include "mnpq/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mnpq/units.hpp"

namespace mnpq {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;  // 0 for command-line overrides
};

class ValueReader {
public:
  explicit ValueReader(const Entry& e) : e_(e) {}

  [[noreturn]] void fail(const std::string& msg) const {
    const std::string where = e_.line > 0 ? e_.section + "." + e_.key
                                          : "override " + e_.section + "." + e_.key;
    throw ConfigError(where + ": " + msg, e_.line);
  }

  // Leading number and the (trimmed) remainder.
  std::pair<double, std::string> split() const {
    const std::string v = trim(e_.value);
    double x = 0.0;
    const auto* first = v.data();
    const auto* last = v.data() + v.size();
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || !std::isfinite(x)) fail("expected a number, got '" + v + "'");
    return {x, trim(std::string_view(res.ptr, static_cast<std::size_t>(last - res.ptr)))};
  }

  double with_units(const std::map<std::string, std::function<double(double)>>& units) const {
    const auto [x, unit] = split();
    if (unit.empty()) {
      std::string names;
      for (const auto& [u, f] : units) names += (names.empty() ? "" : ", ") + u;
      fail("missing unit (expected one of: " + names + ")");
    }
    const auto it = units.find(unit);
    if (it == units.end()) fail("unknown unit '" + unit + "'");
    return it->second(x);
  }

  double length() const {
    return with_units({{"nm", [](double x) { return units::nm(x); }}, {"m", [](double x) { return x; }}});
  }
  double frequency() const {
    return with_units({{"eV", [](double x) { return units::ev_to_rad_per_s(x); }},
                       {"rad/s", [](double x) { return x; }}});
  }
  double velocity() const {
    return with_units({{"m/s", [](double x) { return x; }}});
  }
  double intensity() const {
    return with_units({{"W/cm2", [](double x) { return units::w_per_cm2(x); }},
                       {"W/m2", [](double x) { return x; }}});
  }
  TimeValue time() const {
    const auto [x, unit] = split();
    if (unit == "tau") return {x, true};
    if (unit == "s") return {x, false};
    if (unit == "ns") return {x * 1e-9, false};
    if (unit == "ps") return {x * 1e-12, false};
    if (unit.empty()) fail("missing unit (expected one of: ns, ps, s, tau)");
    fail("unknown unit '" + unit + "'");
  }
  double number() const {
    const auto [x, unit] = split();
    if (!unit.empty()) fail("dimensionless value must not carry a unit ('" + unit + "')");
    return x;
  }
  long integer(long lo) const {
    const std::string v = trim(e_.value);
    long x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) fail("expected an integer, got '" + v + "'");
    if (x < lo) fail("must be >= " + std::to_string(lo));
    return x;
  }
  std::string word() const { return trim(e_.value); }
  template <class T>
  T choice(const std::map<std::string, T>& options) const {
    const auto w = word();
    const auto it = options.find(w);
    if (it != options.end()) return it->second;
    std::string names;
    for (const auto& [k, v] : options) names += (names.empty() ? "" : ", ") + k;
    fail("invalid value '" + w + "' (expected one of: " + names + ")");
  }
  double positive(double x) const {
    if (!(x > 0.0)) fail("must be positive");
    return x;
  }

private:
  const Entry& e_;
};

using Handler = std::function<void(RunConfig&, const ValueReader&)>;

const std::map<std::string, std::map<std::string, Handler>>& handlers() {
  static const std::map<std::string, std::map<std::string, Handler>> table = {
      {"material",
       {
           {"preset", [](RunConfig&, const ValueReader&) {}},  // applied first
           {"plasma_frequency",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.material.plasma_frequency = r.positive(r.frequency());
            }},
           {"damping",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.material.damping = r.positive(r.frequency());
            }},
           {"eps_inf",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.material.eps_inf = r.number();
              if (c.setup.material.eps_inf < 1.0) r.fail("must be >= 1");
            }},
           {"fermi_velocity",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.material.fermi_velocity = r.positive(r.velocity());
            }},
           {"eps_host",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.material.eps_host = r.number();
              if (c.setup.material.eps_host < 1.0) r.fail("must be >= 1");
            }},
       }},
      {"geometry",
       {
           {"radius", [](RunConfig& c, const ValueReader& r) { c.setup.geometry.radius = r.positive(r.length()); }},
           {"qd_radius", [](RunConfig& c, const ValueReader& r) { c.setup.geometry.qd_radius = r.positive(r.length()); }},
           {"gap", [](RunConfig& c, const ValueReader& r) { c.setup.geometry.gap = r.positive(r.length()); }},
           {"gap_start", [](RunConfig& c, const ValueReader& r) { c.gap_range.start = r.positive(r.length()); }},
           {"gap_stop", [](RunConfig& c, const ValueReader& r) { c.gap_range.stop = r.positive(r.length()); }},
           {"gap_points", [](RunConfig& c, const ValueReader& r) { c.gap_range.points = static_cast<std::size_t>(r.integer(1)); }},
           {"radius_start", [](RunConfig& c, const ValueReader& r) { c.radius_range.start = r.positive(r.length()); }},
           {"radius_stop", [](RunConfig& c, const ValueReader& r) { c.radius_range.stop = r.positive(r.length()); }},
           {"radius_points", [](RunConfig& c, const ValueReader& r) { c.radius_range.points = static_cast<std::size_t>(r.integer(1)); }},
       }},
      {"drive",
       {
           {"intensity",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.intensity = r.intensity();
              if (c.setup.intensity < 0.0) r.fail("must be non-negative");
            }},
           {"frequency",
            [](RunConfig& c, const ValueReader& r) {
              if (r.word() == "resonant") {
                c.setup.drive_mode = DriveFrequencyMode::resonant;
                c.setup.drive_frequency = 0.0;
              } else {
                c.setup.drive_mode = DriveFrequencyMode::explicit_value;
                c.setup.drive_frequency = r.positive(r.frequency());
              }
            }},
       }},
      {"qubits",
       {
           {"decay_rate",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.qubit_decay = r.positive(r.with_units({{"rad/s", [](double x) { return x; }}}));
            }},
           {"detuning_fraction",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.detuning_fraction = r.number();
              if (c.setup.detuning_fraction < 0.0) r.fail("must be non-negative");
            }},
           {"initial_state",
            [](RunConfig& c, const ValueReader& r) {
              c.initial_state = r.choice<InitialState>({{"gg", InitialState::gg}, {"eg", InitialState::eg}});
            }},
       }},
      {"run",
       {
           {"analysis",
            [](RunConfig& c, const ValueReader& r) {
              c.analysis = r.choice<Analysis>(
                  {{"dipole", Analysis::dipole}, {"multipole", Analysis::multipole}, {"both", Analysis::both}});
            }},
           {"multipoles",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.multipoles = static_cast<int>(r.integer(1));
              if (c.setup.multipoles > 60) r.fail("must be <= 60");
            }},
           {"response",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.response = r.choice<ResponseKind>(
                  {{"local", ResponseKind::local}, {"nonlocal", ResponseKind::nonlocal}});
            }},
           {"radiative_damping",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.radiative = r.choice<RadiativeDamping>(
                  {{"neglect", RadiativeDamping::neglect}, {"include", RadiativeDamping::include}});
            }},
           {"invalid_mode",
            [](RunConfig& c, const ValueReader& r) {
              c.setup.invalid_correction = r.choice<InvalidCorrectionPolicy>(
                  {{"error", InvalidCorrectionPolicy::error}, {"suppress", InvalidCorrectionPolicy::suppress}});
            }},
           {"engine",
            [](RunConfig& c, const ValueReader& r) {
              c.engine = r.choice<Engine>(
                  {{"superoperator", Engine::superoperator}, {"explicit", Engine::explicit_equations},
                   {"propagator", Engine::propagator}});
            }},
           {"time_start", [](RunConfig& c, const ValueReader& r) { c.time_start = r.time(); }},
           {"time_stop", [](RunConfig& c, const ValueReader& r) { c.time_stop = r.time(); }},
           {"time_points", [](RunConfig& c, const ValueReader& r) { c.time_points = static_cast<std::size_t>(r.integer(2)); }},
           {"rel_tol", [](RunConfig& c, const ValueReader& r) { c.ode.rel_tol = r.positive(r.number()); }},
           {"abs_tol", [](RunConfig& c, const ValueReader& r) { c.ode.abs_tol = r.positive(r.number()); }},
           {"workers", [](RunConfig& c, const ValueReader& r) { c.workers = static_cast<unsigned>(r.integer(0)); }},
           {"output",
            [](RunConfig& c, const ValueReader& r) {
              c.output = r.word();
              if (c.output.empty()) r.fail("must not be empty");
            }},
       }},
  };
  return table;
}

const std::set<std::string>& material_fields() {
  static const std::set<std::string> f{"plasma_frequency", "damping", "eps_inf", "fermi_velocity"};
  return f;
}

void check_range(const Range& r, const char* name) {
  const bool ok = r.points >= 1 && r.start > 0.0 &&
                  (r.points == 1 ? r.stop >= r.start : r.stop > r.start);
  if (!ok) throw ConfigError(std::string("geometry: ") + name + " range must be non-empty and increasing");
}

}  // namespace

std::string_view to_string(Analysis a) {
  switch (a) {
    case Analysis::dipole: return "dipole";
    case Analysis::multipole: return "multipole";
    case Analysis::both: return "both";
  }
  return "both";
}

std::string_view to_string(InitialState s) { return s == InitialState::gg ? "gg" : "eg"; }

std::vector<double> Range::values() const {
  std::vector<double> v(points);
  for (std::size_t k = 0; k < points; ++k) {
    v[k] = points == 1 ? start
                       : start + (stop - start) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  if (points > 1) v.back() = stop;
  return v;
}

RunConfig::RunConfig() {
  setup.material = material_preset("silver-drude");
  setup.geometry = {units::nm(30.0), units::nm(0.8), units::nm(30.0)};
  setup.intensity = units::w_per_cm2(10.0);
  gap_range = {units::nm(5.0), units::nm(95.0), 31};
  radius_range = {units::nm(5.0), units::nm(95.0), 31};
}

DensityMatrix RunConfig::initial_density() const {
  return basis_projector(initial_state == InitialState::gg ? 0 : 2);
}

std::vector<double> RunConfig::time_samples(double gamma_a) const {
  return log_time_grid(time_start.seconds(gamma_a), time_stop.seconds(gamma_a), time_points);
}

PhysicalSetup RunConfig::setup_for(int n, double radius, double gap) const {
  PhysicalSetup s = setup;
  s.multipoles = n;
  s.geometry.radius = radius;
  s.geometry.gap = gap;
  return s;
}

Override parse_override(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + arg + "' must have the form section.key=value");
  const std::string lhs = trim(std::string_view(arg).substr(0, eq));
  if (lhs.find('.') == std::string::npos) {
    throw ConfigError("override '" + arg + "' must name a section, e.g. geometry.radius=30nm");
  }
  return {lhs, trim(std::string_view(arg).substr(eq + 1))};
}

RunConfig parse_config(const std::string& text, const std::vector<Override>& overrides) {
  std::vector<Entry> entries;
  {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
      ++line;
      auto hash = raw.find_first_of("#;");
      std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ConfigError("malformed section header '" + s + "'", line);
        section = trim(std::string_view(s).substr(1, s.size() - 2));
        if (!handlers().count(section)) throw ConfigError("unknown section [" + section + "]", line);
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + s + "'", line);
      if (section.empty()) throw ConfigError("key outside of any section", line);
      Entry e{section, trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)), line};
      if (!seen.insert(section + "." + e.key).second) {
        throw ConfigError("duplicate key " + section + "." + e.key, line);
      }
      entries.push_back(std::move(e));
    }
  }
  for (const auto& [path, value] : overrides) {
    const auto dot = path.find('.');
    Entry e{path.substr(0, dot), path.substr(dot + 1), value, 0};
    if (!handlers().count(e.section)) throw ConfigError("override: unknown section '" + e.section + "'");
    entries.push_back(std::move(e));
  }

  for (const auto& e : entries) {
    const auto& keys = handlers().at(e.section);
    if (!keys.count(e.key)) {
      throw ConfigError("unknown key '" + e.key + "' in [" + e.section + "]", e.line);
    }
  }

  RunConfig cfg;
  // Material: preset first, then individual fields in any order.
  const Entry* preset = nullptr;
  std::set<std::string> explicit_fields;
  for (const auto& e : entries) {
    if (e.section != "material") continue;
    if (e.key == "preset") preset = &e;
    if (material_fields().count(e.key)) explicit_fields.insert(e.key);
  }
  if (preset) {
    try {
      const double host = cfg.setup.material.eps_host;
      cfg.setup.material = material_preset(trim(preset->value));
      cfg.setup.material.eps_host = host;
      cfg.material_name = trim(preset->value);
    } catch (const DomainError& err) {
      ValueReader(*preset).fail(err.what());
    }
  } else if (explicit_fields.size() != material_fields().size()) {
    for (const auto& f : material_fields()) {
      if (!explicit_fields.count(f)) {
        throw ConfigError("missing required key material.preset (or material." + f + ")");
      }
    }
  } else {
    cfg.material_name = "custom";
  }
  if (preset && !explicit_fields.empty()) cfg.material_name += "+overrides";

  bool analysis_set = false;
  for (const auto& e : entries) {
    ValueReader r(e);
    handlers().at(e.section).at(e.key)(cfg, r);
    if (e.section == "run" && e.key == "analysis") analysis_set = true;
  }
  if (cfg.setup.multipoles == 1 && !analysis_set) cfg.analysis = Analysis::dipole;

  check_range(cfg.gap_range, "gap");
  check_range(cfg.radius_range, "radius");
  if (cfg.time_start.relative != cfg.time_stop.relative) {
    throw ConfigError("run: time_start and time_stop must both be absolute or both in tau");
  }
  if (!(cfg.time_start.value > 0.0) || !(cfg.time_stop.value > cfg.time_start.value)) {
    throw ConfigError("run: time grid needs 0 < time_start < time_stop");
  }
  try {
    cfg.setup.validate();
  } catch (const DomainError& err) {
    throw ConfigError(err.what());
  }
  return cfg;
}

std::string resolved_config_json(const RunConfig& cfg) {
  using nlohmann::json;
  const auto& m = cfg.setup.material;
  const auto& g = cfg.setup.geometry;
  auto time = [](const TimeValue& t) { return json{{"value", t.value}, {"unit", t.relative ? "tau" : "s"}}; };
  json j;
  j["material"] = {{"name", cfg.material_name},
                   {"plasma_frequency_rad_s", m.plasma_frequency},
                   {"damping_rad_s", m.damping},
                   {"eps_inf", m.eps_inf},
                   {"fermi_velocity_m_s", m.fermi_velocity},
                   {"eps_host", m.eps_host}};
  j["geometry"] = {{"radius_m", g.radius},
                   {"qd_radius_m", g.qd_radius},
                   {"gap_m", g.gap},
                   {"gap_range_m", {cfg.gap_range.start, cfg.gap_range.stop, cfg.gap_range.points}},
                   {"radius_range_m", {cfg.radius_range.start, cfg.radius_range.stop, cfg.radius_range.points}}};
  j["drive"] = {{"intensity_w_m2", cfg.setup.intensity},
                {"frequency", cfg.setup.drive_mode == DriveFrequencyMode::resonant
                                  ? json("resonant")
                                  : json(cfg.setup.drive_frequency)}};
  j["qubits"] = {{"decay_rate_rad_s", cfg.setup.qubit_decay},
                 {"detuning_fraction", cfg.setup.detuning_fraction},
                 {"initial_state", std::string(to_string(cfg.initial_state))}};
  j["run"] = {{"analysis", std::string(to_string(cfg.analysis))},
              {"multipoles", cfg.setup.multipoles},
              {"response", std::string(to_string(cfg.setup.response))},
              {"radiative_damping", cfg.setup.radiative == RadiativeDamping::include ? "include" : "neglect"},
              {"invalid_mode", cfg.setup.invalid_correction == InvalidCorrectionPolicy::error ? "error" : "suppress"},
              {"engine", std::string(to_string(cfg.engine))},
              {"time_start", time(cfg.time_start)},
              {"time_stop", time(cfg.time_stop)},
              {"time_points", cfg.time_points},
              {"rel_tol", cfg.ode.rel_tol},
              {"abs_tol", cfg.ode.abs_tol},
              {"output", cfg.output}};
  return j.dump(2);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

unsigned effective_workers(const RunConfig& cfg) {
  unsigned n = cfg.workers;
  if (const char* env = std::getenv("MNPQ_WORKERS"); env && *env) {
    const std::string v = trim(env);
    unsigned x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      throw ConfigError("MNPQ_WORKERS must be a non-negative integer, got '" + v + "'");
    }
    n = x;
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

}  // namespace mnpq
