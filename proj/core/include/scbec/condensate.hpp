#pragma once

#include <array>
#include <string>
#include <vector>

#include "scbec/fluxloop.hpp"
#include "scbec/trap.hpp"

namespace scbec {

struct CondensateSpec {
  AtomSpecies atom;
  long atoms = 1;  // N

  void validate() const;
};

/// Thomas-Fermi chemical potential (J) in a harmonic trap:
/// mu = (hbar wbar / 2) (15 N a_s / a_ho)^(2/5), a_ho = sqrt(hbar / (m wbar)).
double thomas_fermi_mu(const CondensateSpec& spec, const std::array<double, 3>& frequencies);

/// Per-axis harmonic-oscillator ground-state length sqrt(hbar / (m omega_i)).
std::array<double, 3> ground_width(const std::array<double, 3>& frequencies, const AtomSpecies& atom);

/// Branch-conditioned condensate energies: trap-bottom Zeeman energy plus
/// the Thomas-Fermi chemical potential in that branch's trap.
struct BranchEnergetics {
  double mu0 = 0.0;        // J
  double mu1 = 0.0;
  double mu0_field = 0.0;  // T, mu0 / (mF gF muB)
  double mu1_field = 0.0;
  double interaction0 = 0.0;  // J, Thomas-Fermi part only
  double interaction1 = 0.0;
  /// mu0 - mu1 formed from the field and interaction differences separately,
  /// free of the cancellation in subtracting the two totals.
  double delta_mu = 0.0;  // J
  TrapCharacterization trap0;
  TrapCharacterization trap1;
  std::vector<std::string> warnings;
};

/// Energy of one trap: returns {mu (J), mu in field units (T), TF part (J)}.
struct TrapEnergy {
  double mu = 0.0;
  double mu_field = 0.0;
  double interaction = 0.0;
};
TrapEnergy trap_energy(const CondensateSpec& spec, const TrapCharacterization& trap);

/// Characterises the trap for each branch current (starting from the given
/// guesses) and evaluates both energies. NotATrapError/ConvergenceError from
/// a branch is rethrown with the branch label.
BranchEnergetics branch_energetics(const ChipGeometry& base, const FluxLoopState& loop,
                                   const CondensateSpec& spec, const Vec3& guess0,
                                   const Vec3& guess1, const MinimizerOptions& options = {});

/// Starting points for the branch searches: the minimum of each branch's
/// |B| sampled along x through `unperturbed_minimum` (+-3 loop diameters).
std::pair<Vec3, Vec3> branch_seeds(const ChipGeometry& base, const FluxLoopState& loop,
                                   const Vec3& unperturbed_minimum);

/// Convenience overload: seeds both branches from the unperturbed trap found
/// near `guess`.
BranchEnergetics branch_energetics(const ChipGeometry& base, const FluxLoopState& loop,
                                   const CondensateSpec& spec, const Vec3& guess);

}  // namespace scbec
