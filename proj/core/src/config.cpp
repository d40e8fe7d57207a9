#include "scbec/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "scbec/errors.hpp"
#include "scbec/fluxloop.hpp"

namespace scbec {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string real_text(double v) { return fmt::format("{:.17g}", v); }

struct Context {
  std::string origin;
  int line = 0;
  std::string key;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(fmt::format("{}:{}: {}: {}", origin, line, key, what));
  }
};

double parse_real(const Context& c, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) c.fail(fmt::format("'{}' is not a number", v));
  if (!std::isfinite(out)) c.fail("value must be finite");
  return out;
}

double parse_positive(const Context& c, const std::string& v) {
  const double x = parse_real(c, v);
  if (!(x > 0.0)) c.fail("value must be positive");
  return x;
}

double parse_nonnegative(const Context& c, const std::string& v) {
  const double x = parse_real(c, v);
  if (!(x >= 0.0)) c.fail("value must be >= 0");
  return x;
}

long long parse_integer(const Context& c, const std::string& v) {
  long long out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) c.fail(fmt::format("'{}' is not an integer", v));
  return out;
}

std::uint64_t parse_count(const Context& c, const std::string& v, std::uint64_t minimum) {
  const long long n = parse_integer(c, v);
  if (n < 0 || static_cast<std::uint64_t>(n) < minimum) c.fail(fmt::format("value must be >= {}", minimum));
  return static_cast<std::uint64_t>(n);
}

bool parse_bool(const Context& c, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  c.fail("expected true or false");
}

using Setter = std::function<void(SimulationConfig&, const Context&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"wire.bar_length_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.wire.bar_length = parse_positive(c, v); }},
      {"wire.lead_length_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.wire.lead_length = parse_positive(c, v); }},
      {"wire.current_a",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.wire.current = parse_real(c, v);
         if (s.wire.current == 0.0) c.fail("current must be nonzero");
       }},
      {"bias.x_t", [](SimulationConfig& s, const Context& c, const std::string& v) { s.bias.x = parse_real(c, v); }},
      {"bias.y_t", [](SimulationConfig& s, const Context& c, const std::string& v) { s.bias.y = parse_real(c, v); }},
      {"loop.radius_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.loop.radius = parse_positive(c, v); }},
      {"loop.wire_radius_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.loop.wire_radius = parse_positive(c, v); }},
      {"loop.separation_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.loop.separation = parse_positive(c, v); }},
      {"loop.x_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         if (v == "from-trap") {
           s.loop.x.reset();
         } else {
           s.loop.x = parse_real(c, v);
         }
       }},
      {"loop.y_m", [](SimulationConfig& s, const Context& c, const std::string& v) { s.loop.y = parse_real(c, v); }},
      {"loop.zbias_t",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         if (v == "half-flux-quantum") {
           s.loop.zbias_mode = ZBiasMode::half_flux_quantum;
         } else {
           s.loop.zbias_mode = ZBiasMode::explicit_value;
           s.loop.zbias = parse_real(c, v);
         }
       }},
      {"loop.n0", [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.loop.n0 = static_cast<int>(parse_integer(c, v));
       }},
      {"loop.n1", [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.loop.n1 = static_cast<int>(parse_integer(c, v));
       }},
      {"loop.critical_field_t",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.loop.critical_field = parse_positive(c, v); }},
      {"atom.species",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         if (v != "rb87") c.fail(fmt::format("unknown species '{}' (known: rb87)", v));
         s.atom = AtomSpecies::rb87();
       }},
      {"atom.mass_kg",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.atom.mass = parse_positive(c, v);
         s.atom.label = "custom";
       }},
      {"atom.g_f", [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.atom.g_f = parse_real(c, v);
         s.atom.label = "custom";
       }},
      {"atom.m_f", [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.atom.m_f = static_cast<int>(parse_integer(c, v));
         s.atom.label = "custom";
       }},
      {"atom.scattering_length_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.atom.scattering_length = parse_positive(c, v);
         s.atom.label = "custom";
       }},
      {"condensate.atoms",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.atoms = static_cast<long>(parse_count(c, v, 1));
       }},
      {"ramp.duration_s",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.ramp.duration = parse_positive(c, v); }},
      {"ramp.steps",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.ramp.steps = parse_count(c, v, 2); }},
      {"ramp.start_separation_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.ramp.start_separation = parse_positive(c, v);
       }},
      {"ramp.end_separation_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.ramp.end_separation = parse_positive(c, v);
       }},
      {"ramp.shape",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         if (v == "linear") {
           s.ramp.shape = RampShape::linear;
         } else if (v == "smoothstep") {
           s.ramp.shape = RampShape::smoothstep;
         } else {
           c.fail("expected linear or smoothstep");
         }
       }},
      {"interferometry.tof_s",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.interferometry.tof = parse_positive(c, v); }},
      {"interferometry.separation_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         if (v == "from-trap") {
           s.interferometry.separation.reset();
         } else {
           s.interferometry.separation = parse_positive(c, v);
         }
       }},
      {"interferometry.sigma0_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         if (v == "from-trap") {
           s.interferometry.sigma0.reset();
         } else {
           s.interferometry.sigma0 = parse_positive(c, v);
         }
       }},
      {"interferometry.atoms",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.interferometry.atoms = static_cast<long>(parse_count(c, v, 1));
       }},
      {"interferometry.shots",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.interferometry.shots = parse_count(c, v, 1); }},
      {"interferometry.seed",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.interferometry.seed = parse_count(c, v, 0); }},
      {"interferometry.phase_rad",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.interferometry.phase = parse_real(c, v); }},
      {"interferometry.phase_noise_rad",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         s.interferometry.phase_noise = parse_nonnegative(c, v);
       }},
      {"interferometry.efficiency",
       [](SimulationConfig& s, const Context& c, const std::string& v) {
         const double e = parse_real(c, v);
         if (!(e > 0.0 && e <= 1.0)) c.fail("efficiency must lie in (0, 1]");
         s.interferometry.efficiency = e;
       }},
      {"interferometry.atom_loss",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.interferometry.atom_loss = parse_bool(c, v); }},
      {"profile.half_span_m",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.profile.half_span = parse_positive(c, v); }},
      {"profile.samples",
       [](SimulationConfig& s, const Context& c, const std::string& v) { s.profile.samples = parse_count(c, v, 2); }},
  };
  return table;
}

const std::vector<std::string>& mandatory_keys() {
  static const std::vector<std::string> keys = {
      "wire.bar_length_m", "wire.lead_length_m", "wire.current_a", "bias.y_t",
      "loop.radius_m",     "loop.separation_m",  "condensate.atoms"};
  return keys;
}

}  // namespace

double SimulationConfig::zbias() const {
  return loop.zbias_mode == ZBiasMode::half_flux_quantum ? half_flux_quantum_bias(loop.radius) : loop.zbias;
}

std::vector<std::pair<std::string, std::string>> SimulationConfig::echo() const {
  const auto opt = [](const std::optional<double>& v, const char* token) {
    return v ? real_text(*v) : std::string(token);
  };
  return {
      {"wire.bar_length_m", real_text(wire.bar_length)},
      {"wire.lead_length_m", real_text(wire.lead_length)},
      {"wire.current_a", real_text(wire.current)},
      {"bias.x_t", real_text(bias.x)},
      {"bias.y_t", real_text(bias.y)},
      {"loop.radius_m", real_text(loop.radius)},
      {"loop.wire_radius_m", real_text(loop.wire_radius)},
      {"loop.separation_m", real_text(loop.separation)},
      {"loop.x_m", opt(loop.x, "from-trap")},
      {"loop.y_m", real_text(loop.y)},
      {"loop.zbias_t",
       loop.zbias_mode == ZBiasMode::half_flux_quantum ? std::string("half-flux-quantum") : real_text(loop.zbias)},
      {"loop.n0", std::to_string(loop.n0)},
      {"loop.n1", std::to_string(loop.n1)},
      {"loop.critical_field_t", real_text(loop.critical_field)},
      {"atom.label", atom.label},
      {"atom.mass_kg", real_text(atom.mass)},
      {"atom.g_f", real_text(atom.g_f)},
      {"atom.m_f", std::to_string(atom.m_f)},
      {"atom.scattering_length_m", real_text(atom.scattering_length)},
      {"condensate.atoms", std::to_string(atoms)},
      {"ramp.duration_s", real_text(ramp.duration)},
      {"ramp.steps", std::to_string(ramp.steps)},
      {"ramp.start_separation_m", real_text(ramp.start_separation)},
      {"ramp.end_separation_m", real_text(ramp.end_separation)},
      {"ramp.shape", ramp.shape == RampShape::linear ? "linear" : "smoothstep"},
      {"interferometry.tof_s", real_text(interferometry.tof)},
      {"interferometry.separation_m", opt(interferometry.separation, "from-trap")},
      {"interferometry.sigma0_m", opt(interferometry.sigma0, "from-trap")},
      {"interferometry.atoms", std::to_string(interferometry.atoms)},
      {"interferometry.shots", std::to_string(interferometry.shots)},
      {"interferometry.seed", std::to_string(interferometry.seed)},
      {"interferometry.phase_rad", real_text(interferometry.phase)},
      {"interferometry.phase_noise_rad", real_text(interferometry.phase_noise)},
      {"interferometry.efficiency", real_text(interferometry.efficiency)},
      {"interferometry.atom_loss", interferometry.atom_loss ? "true" : "false"},
      {"profile.half_span_m", real_text(profile.half_span)},
      {"profile.samples", std::to_string(profile.samples)},
  };
}

SimulationConfig parse_config(const std::string& text, const std::string& origin) {
  SimulationConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  Context c{origin, 0, {}};
  while (std::getline(in, raw)) {
    ++c.line;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'section.key = value'", origin, c.line));
    }
    c.key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (c.key.empty()) throw ConfigError(fmt::format("{}:{}: missing key before '='", origin, c.line));
    if (value.empty()) c.fail("missing value");
    const auto it = setters().find(c.key);
    if (it == setters().end()) c.fail("unknown key");
    if (!seen.insert(c.key).second) c.fail("key given twice");
    it->second(cfg, c, value);
  }
  for (const auto& key : mandatory_keys()) {
    if (!seen.count(key)) throw ConfigError(fmt::format("{}: missing mandatory key {}", origin, key));
  }
  if (cfg.loop.n0 == cfg.loop.n1) throw ConfigError(fmt::format("{}: loop.n0 and loop.n1 must differ", origin));
  if (!(cfg.loop.wire_radius < 0.5 * cfg.loop.radius)) {
    throw ConfigError(fmt::format("{}: loop.wire_radius_m must be below loop.radius_m / 2", origin));
  }
  try {
    cfg.atom.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(fmt::format("{}: atom: {}", origin, e.what()));
  }
  try {
    cfg.ramp.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(fmt::format("{}: ramp: {}", origin, e.what()));
  }
  if (cfg.interferometry.atoms > 8) {
    throw ConfigError(fmt::format("{}: interferometry.atoms: exact sampling supports at most 8", origin));
  }
  return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace scbec
