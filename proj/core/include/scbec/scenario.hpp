#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scbec/condensate.hpp"
#include "scbec/config.hpp"
#include "scbec/fluxloop.hpp"
#include "scbec/interferometry.hpp"

namespace scbec {

/// Everything derived from a configuration before any subcommand runs.
struct Scenario {
  SimulationConfig config;
  ChipGeometry base;          // Z wire plus the (x, y, z) bias
  TrapCharacterization bare;  // trap without the loop
  FluxLoopState flux;         // loop placed `separation` below the bare trap
  CondensateSpec condensate;
};

/// Z wire and uniform bias (x, y and the resolved z bias).
ChipGeometry build_base_geometry(const SimulationConfig& cfg);

/// Infinite-wire estimate of the trap position, height mu0 |I| / (2 pi |By|).
Vec3 estimate_trap_position(const SimulationConfig& cfg);

/// Loop centre: x from the trap (or loop.x_m), y = loop.y_m, z = trap z -
/// separation; normal +z.
Scenario build_scenario(const SimulationConfig& cfg);

/// Expanded mode pair for the interferometry keys; from-trap values use the
/// branch minima spacing (d) and the axial ground width (sigma0).
ModePair build_modes(const Scenario& s);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> shots;
};

struct RunResult {
  std::string run_id;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

const std::vector<std::string>& subcommand_names();

/// Deterministic 16-hex-digit identifier of (config echo, subcommand).
std::string make_run_id(const SimulationConfig& cfg, const std::string& subcommand);

/// Applies the overrides, runs the subcommand and writes its CSVs plus a
/// metadata JSON into `out`. Files are named `<kind>-<run id>.<ext>` and are
/// never overwritten. Module errors propagate.
RunResult run_subcommand(const std::string& name, SimulationConfig cfg, const std::filesystem::path& out,
                         const RunOptions& options = {});

}  // namespace scbec
