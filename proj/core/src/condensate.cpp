#include "scbec/condensate.hpp"

#include <algorithm>
#include <cmath>

#include "scbec/constants.hpp"
#include "scbec/errors.hpp"

namespace scbec {

void CondensateSpec::validate() const {
  atom.validate();
  if (atoms < 1) throw ArgumentError("condensate needs at least one atom");
}

namespace {

void check_frequencies(const std::array<double, 3>& frequencies) {
  for (double w : frequencies) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ArgumentError("trap frequencies must be positive");
  }
}

}  // namespace

double thomas_fermi_mu(const CondensateSpec& spec, const std::array<double, 3>& frequencies) {
  spec.validate();
  check_frequencies(frequencies);
  const double wbar = std::cbrt(frequencies[0] * frequencies[1] * frequencies[2]);
  const double a_ho = std::sqrt(constants::hbar / (spec.atom.mass * wbar));
  const double n = static_cast<double>(spec.atoms);
  return 0.5 * constants::hbar * wbar *
         std::pow(15.0 * n * spec.atom.scattering_length / a_ho, 0.4);
}

std::array<double, 3> ground_width(const std::array<double, 3>& frequencies, const AtomSpecies& atom) {
  atom.validate();
  check_frequencies(frequencies);
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = std::sqrt(constants::hbar / (atom.mass * frequencies[i]));
  return out;
}

TrapEnergy trap_energy(const CondensateSpec& spec, const TrapCharacterization& trap) {
  const double moment = spec.atom.magnetic_moment();
  TrapEnergy e;
  e.interaction = thomas_fermi_mu(spec, trap.frequencies);
  // mu is defined from the field-unit value so that mu_field * moment == mu.
  e.mu_field = trap.field_at_minimum + e.interaction / moment;
  e.mu = e.mu_field * moment;
  return e;
}

std::pair<Vec3, Vec3> branch_seeds(const ChipGeometry& base, const FluxLoopState& loop,
                                   const Vec3& unperturbed_minimum) {
  AxialLine line;
  line.origin = unperturbed_minimum;
  line.direction = {1.0, 0.0, 0.0};
  line.half_span = 6.0 * loop.loop.radius();
  const AxialProfile prof = axial_profile(base, loop.branch_loops(), line, 241);
  const auto argmin = [&](const std::vector<double>& v) {
    const auto it = std::min_element(v.begin(), v.end());
    const double s = prof.positions[static_cast<std::size_t>(it - v.begin())];
    return unperturbed_minimum + Vec3{s, 0.0, 0.0};
  };
  return {argmin(prof.branch0), argmin(prof.branch1)};
}

BranchEnergetics branch_energetics(const ChipGeometry& base, const FluxLoopState& loop,
                                   const CondensateSpec& spec, const Vec3& guess0,
                                   const Vec3& guess1, const MinimizerOptions& options) {
  spec.validate();
  const auto [loop0, loop1] = loop.branch_loops();
  const auto characterize = [&](const CurrentLoop& l, const Vec3& guess, const char* label) {
    try {
      return characterize_trap(base.with_loop(l), spec.atom, guess, options);
    } catch (const NotATrapError& e) {
      throw NotATrapError(std::string(label) + ": " + e.what());
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string(label) + ": " + e.what());
    }
  };
  BranchEnergetics out;
  out.trap0 = characterize(loop0, guess0, "branch 0");
  out.trap1 = characterize(loop1, guess1, "branch 1");
  const TrapEnergy e0 = trap_energy(spec, out.trap0);
  const TrapEnergy e1 = trap_energy(spec, out.trap1);
  out.mu0 = e0.mu;
  out.mu1 = e1.mu;
  out.mu0_field = e0.mu_field;
  out.mu1_field = e1.mu_field;
  out.interaction0 = e0.interaction;
  out.interaction1 = e1.interaction;
  out.delta_mu = spec.atom.magnetic_moment() * (out.trap0.field_at_minimum - out.trap1.field_at_minimum) +
                 (e0.interaction - e1.interaction);
  if (spec.atoms < 100) {
    out.warnings.emplace_back("N < 100: Thomas-Fermi approximation is not reliable");
  }
  return out;
}

BranchEnergetics branch_energetics(const ChipGeometry& base, const FluxLoopState& loop,
                                   const CondensateSpec& spec, const Vec3& guess) {
  const TrapCharacterization bare = find_minimum(base, spec.atom, guess);
  const auto [s0, s1] = branch_seeds(base, loop, bare.minimum);
  return branch_energetics(base, loop, spec, s0, s1);
}

}  // namespace scbec
