#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scbec/condensate.hpp"
#include "scbec/detail/spline.hpp"
#include "scbec/fluxloop.hpp"
#include "scbec/trap.hpp"

namespace scbec {

enum class RampShape { linear, smoothstep };

/// Transport of the trap toward the loop: the trap-loop separation follows
/// `shape` from start_separation (t = 0) to end_separation (t = duration).
/// Steps are evaluated on [window_begin, window_end]; by default the whole
/// ramp. A window lets a ramp be run in pieces on the same time grid.
struct RampSchedule {
  double duration = 0.1;            // s
  std::size_t steps = 512;
  double start_separation = 1e-4;   // m
  double end_separation = 1e-5;     // m
  RampShape shape = RampShape::smoothstep;
  double window_begin = 0.0;        // s
  double window_end = -1.0;         // s, negative means duration

  void validate() const;
  double time_at(std::size_t step) const;
  double separation_at_time(double t) const;
  double separation_at(std::size_t step) const { return separation_at_time(time_at(step)); }
};

/// Maps trap-loop separation to the y-bias that produces it (natural cubic
/// spline through characterised trap heights).
class TransportTable {
 public:
  TransportTable(const ChipGeometry& base, const AtomSpecies& atom, const CurrentLoop& loop,
                 const Vec3& trap_guess, double min_separation, double max_separation,
                 std::size_t nodes = 33);

  double bias_for(double separation) const;
  double min_separation() const { return spline_.min_x(); }
  double max_separation() const { return spline_.max_x(); }

 private:
  detail::CubicSpline spline_;
};

/// Height of the trap minimum above the loop plane, along the loop normal.
double trap_separation(const CurrentLoop& loop, const Vec3& trap_minimum);

struct ProtocolSample {
  double time = 0.0;        // s
  double separation = 0.0;  // m
  double y_bias = 0.0;      // T
  double mu0 = 0.0;         // J
  double mu1 = 0.0;         // J
  double phase = 0.0;       // rad, accumulated up to this sample
  double adiabatic_margin = 0.0;
  double current_branch0 = 0.0;  // A
  double current_branch1 = 0.0;  // A
};

struct EntangledSystemState {
  long atoms = 0;  // N
  QubitState qubit;
  double phase = 0.0;   // Phi, rad
  double gamma0 = 0.0;  // geometric phases, held at zero
  double gamma1 = 0.0;
  bool lost_atom = false;
  double phase_noise_sigma = 0.0;  // rad
  double adiabatic_margin = 0.0;
  std::vector<ProtocolSample> trace;
  std::vector<TrapCharacterization> traps0;
  std::vector<TrapCharacterization> traps1;
  std::vector<std::string> warnings;

  bool mixed() const { return lost_atom; }
};

struct ProtocolOptions {
  double adiabatic_threshold = 0.1;
  std::size_t table_nodes = 33;
  MinimizerOptions minimizer{};
};

/// Trapezoid accumulation of N * integral delta_mu / hbar dt with
/// delta_mu = mu0 - mu1; returns the running phase at every sample.
std::vector<double> accumulate_phase(const std::vector<double>& times, const std::vector<double>& delta_mu,
                                     long atoms);
std::vector<double> accumulate_phase(const std::vector<double>& times, const std::vector<double>& mu0,
                                     const std::vector<double>& mu1, long atoms);

/// Runs the transport: for every ramp step the y-bias is set from the
/// transport table, branch currents are refreshed from the instantaneous
/// external flux, both branch traps are characterised (continuing from the
/// previous step's minima) and the entangling phase is integrated.
/// `loop` fixes the ring geometry and fluxoid numbers; `trap_guess` locates
/// the bare trap for `base`. Any failure is rethrown as ProtocolError with
/// the step index.
EntangledSystemState run_protocol(const ChipGeometry& base, const FluxLoopState& loop,
                                  const CondensateSpec& spec, const RampSchedule& ramp,
                                  const Vec3& trap_guess, const ProtocolOptions& options = {});

/// Largest local |d omega_min/dt| / omega_min^2 over the ramp.
double adiabaticity_margin(const RampSchedule& ramp, const std::vector<TrapCharacterization>& traps);

/// Same quantity evaluated at every step.
std::vector<double> adiabaticity_profile(const RampSchedule& ramp,
                                         const std::vector<TrapCharacterization>& traps);

/// Records shot-to-shot Gaussian phase noise of width sigma (rad).
EntangledSystemState apply_phase_noise(EntangledSystemState state, double sigma);

/// One atom lost to the environment: N -> N - 1 and the state becomes a
/// mixture with no centre-of-mass interference.
EntangledSystemState apply_atom_loss(EntangledSystemState state);

}  // namespace scbec
