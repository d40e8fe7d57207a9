#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scbec/entangler.hpp"
#include "scbec/trap.hpp"

namespace scbec {

enum class ZBiasMode { half_flux_quantum, explicit_value };

struct WireConfig {
  double bar_length = 0.0;   // m
  double lead_length = 0.0;  // m
  double current = 0.0;      // A
};

struct BiasConfig {
  double x = 1e-4;  // T, axial (Ioffe) bias
  double y = 0.0;   // T, transverse bias forming the trap
};

struct LoopConfig {
  double radius = 0.0;       // m
  double wire_radius = 5e-7;  // m
  double separation = 0.0;   // m, below the bare trap minimum along z
  std::optional<double> x;   // m, centre x; unset follows the trap minimum
  double y = 0.0;            // m, centre y
  ZBiasMode zbias_mode = ZBiasMode::half_flux_quantum;
  double zbias = 0.0;        // T, used when zbias_mode is explicit_value
  int n0 = 0;
  int n1 = 1;
  double critical_field = 1e-2;  // T
};

struct InterferometryConfig {
  double tof = 0.1;                  // s
  std::optional<double> separation;  // m, unset means from-trap
  std::optional<double> sigma0;      // m, unset means from-trap
  long atoms = 2;
  std::uint64_t shots = 20000;
  std::uint64_t seed = 1;
  double phase = 0.0;        // rad
  double phase_noise = 0.0;  // rad
  double efficiency = 1.0;
  bool atom_loss = false;
};

struct ProfileConfig {
  double half_span = 3e-5;  // m
  std::size_t samples = 601;
};

struct SimulationConfig {
  WireConfig wire;
  BiasConfig bias;
  LoopConfig loop;
  AtomSpecies atom = AtomSpecies::rb87();
  long atoms = 0;  // condensate N
  RampSchedule ramp;
  InterferometryConfig interferometry;
  ProfileConfig profile;

  /// Resolved z bias (T).
  double zbias() const;
  /// Canonical `key = value` lines for every key, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parses the line-oriented `section.key = value` format. `origin` names the
/// source in error messages.
SimulationConfig parse_config(const std::string& text, const std::string& origin = "<string>");
SimulationConfig load_config(const std::filesystem::path& path);

}  // namespace scbec
