#pragma once

#include <complex>
#include <cstddef>
#include <utility>

#include "scbec/magnetostatics.hpp"

namespace scbec {

/// L = mu0 R (ln(8R/a) - 2) for a thin ring; requires 0 < a < R/2.
double self_inductance(double loop_radius, double wire_radius);

/// Flux of every source in `g` through the disc spanned by `loop` (the loop's
/// own current is ignored). Adaptive 2-D quadrature to 1e-6 relative.
double external_flux(const CurrentLoop& loop, const ChipGeometry& g);

/// Superconducting ring biased by external flux, with two fluxoid branches.
struct FluxLoopState {
  CurrentLoop loop;  // geometry; its current is not used
  double wire_radius = 0.0;
  double self_inductance = 0.0;
  double external_flux = 0.0;
  int branch_n0 = 0;
  int branch_n1 = 1;
  double current_branch0 = 0.0;
  double current_branch1 = 0.0;

  /// The loop carrying each branch's persistent current.
  std::pair<CurrentLoop, CurrentLoop> branch_loops() const;
};

/// I = (n Phi0 - Phi_ext) / L.
double persistent_current(const FluxLoopState& state, int n);

/// Evaluates L and the flux from `g`, then both branch currents.
FluxLoopState make_flux_loop_state(const CurrentLoop& loop, double wire_radius, const ChipGeometry& g,
                                   int n0 = 0, int n1 = 1);

/// Same ring with a new external flux; branch integers are kept.
FluxLoopState with_external_flux(FluxLoopState state, double flux);

/// Uniform normal field that threads exactly half a flux quantum.
double half_flux_quantum_bias(double loop_radius);

/// Two-level reduction of the ring: H = E0 (|0><0| + |1><1|) + J (|0><1| + |1><0|).
struct QubitState {
  std::complex<double> c0{1.0, 0.0};
  std::complex<double> c1{0.0, 0.0};
  double energy = 0.0;   // E0, J
  double tunnel = 0.0;   // J, J

  double norm_squared() const { return std::norm(c0) + std::norm(c1); }
};

/// Applies exp(-i H dt / hbar) exactly. dt must be >= 0.
QubitState qubit_evolve(const QubitState& q, double dt);

/// (|0> + |1>)/sqrt(2) with tunnelling switched off.
QubitState prepare_symmetric_superposition();

struct CriticalFieldReport {
  double max_field = 0.0;  // T
  double critical_field = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

/// Samples |B| from `g` at evenly spaced points on the loop filament.
CriticalFieldReport critical_field_check(const ChipGeometry& g, const CurrentLoop& loop,
                                         double critical_field, std::size_t samples = 360);

}  // namespace scbec
