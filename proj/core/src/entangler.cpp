#include "scbec/entangler.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "scbec/constants.hpp"
#include "scbec/errors.hpp"

namespace scbec {

void RampSchedule::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ArgumentError("ramp duration must be positive");
  if (steps < 2) throw ArgumentError("ramp needs at least two steps");
  if (!(start_separation > 0.0) || !(end_separation > 0.0) || !std::isfinite(start_separation) ||
      !std::isfinite(end_separation)) {
    throw ArgumentError("ramp separations must be positive");
  }
  const double end = window_end < 0.0 ? duration : window_end;
  if (!(window_begin >= 0.0) || !(end > window_begin) || end > duration * (1.0 + 1e-12)) {
    throw ArgumentError("ramp window must satisfy 0 <= begin < end <= duration");
  }
}

double RampSchedule::time_at(std::size_t step) const {
  const double end = window_end < 0.0 ? duration : window_end;
  if (step + 1 == steps) return end;
  return window_begin +
         (end - window_begin) * static_cast<double>(step) / static_cast<double>(steps - 1);
}

double RampSchedule::separation_at_time(double t) const {
  const double tau = std::clamp(t / duration, 0.0, 1.0);
  const double s = shape == RampShape::linear ? tau : tau * tau * (3.0 - 2.0 * tau);
  return start_separation + (end_separation - start_separation) * s;
}

double trap_separation(const CurrentLoop& loop, const Vec3& trap_minimum) {
  return dot(trap_minimum - loop.center(), loop.normal());
}

namespace {

struct TableNode {
  double bias;
  double separation;
};

}  // namespace

TransportTable::TransportTable(const ChipGeometry& base, const AtomSpecies& atom, const CurrentLoop& loop,
                               const Vec3& trap_guess, double min_separation, double max_separation,
                               std::size_t nodes) {
  if (!(min_separation > 0.0) || !(max_separation > min_separation)) {
    throw ArgumentError("transport table needs 0 < min separation < max separation");
  }
  if (nodes < 3) throw ArgumentError("transport table needs at least three nodes");
  const double by_ref = base.bias.y;
  if (by_ref == 0.0) throw ArgumentError("transport needs a nonzero y bias to scale");

  const TrapCharacterization ref = find_minimum(base, atom, trap_guess);
  const double plane = dot(loop.center(), loop.normal());
  const double height_ref = trap_separation(loop, ref.minimum) + plane;
  if (!(height_ref > 0.0)) throw ArgumentError("reference trap lies below the chip plane");
  // Trap height scales roughly as 1 / bias.
  const auto bias_estimate = [&](double sep) { return by_ref * height_ref / (plane + sep); };

  for (double margin = 0.05; margin < 1.0; margin *= 2.0) {
    const double b_far = bias_estimate(max_separation) * (1.0 - margin);
    const double b_near = bias_estimate(min_separation) * (1.0 + margin);
    std::vector<TableNode> table;
    Vec3 guess = ref.minimum * (by_ref / b_far);
    for (std::size_t j = 0; j < nodes; ++j) {
      const double b = b_far + (b_near - b_far) * static_cast<double>(j) / static_cast<double>(nodes - 1);
      const ChipGeometry g = base.with_bias({base.bias.x, b, base.bias.z});
      const TrapCharacterization c = find_minimum(g, atom, guess);
      table.push_back({b, trap_separation(loop, c.minimum)});
      guess = c.minimum;
    }
    std::sort(table.begin(), table.end(),
              [](const TableNode& a, const TableNode& b) { return a.separation < b.separation; });
    if (table.front().separation > min_separation || table.back().separation < max_separation) {
      continue;
    }
    std::vector<double> xs, ys;
    for (const auto& n : table) {
      xs.push_back(n.separation);
      ys.push_back(n.bias);
    }
    spline_ = detail::CubicSpline(std::move(xs), std::move(ys));
    return;
  }
  throw ConvergenceError(fmt::format(
      "y-bias scan could not bracket separations [{:.6e}, {:.6e}] m", min_separation, max_separation));
}

double TransportTable::bias_for(double separation) const {
  if (separation < spline_.min_x() || separation > spline_.max_x()) {
    throw ArgumentError(fmt::format("separation {:.6e} m outside the transport table", separation));
  }
  return spline_(separation);
}

std::vector<double> accumulate_phase(const std::vector<double>& times, const std::vector<double>& delta_mu,
                                     long atoms) {
  if (times.size() != delta_mu.size()) {
    throw ArgumentError("phase accumulation needs aligned time and energy series");
  }
  std::vector<double> phi(times.size(), 0.0);
  const double scale = static_cast<double>(atoms) / constants::hbar;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double dt = times[k] - times[k - 1];
    if (!(dt > 0.0)) throw ArgumentError("phase accumulation times must increase strictly");
    phi[k] = phi[k - 1] + scale * 0.5 * (delta_mu[k - 1] + delta_mu[k]) * dt;
  }
  return phi;
}

std::vector<double> accumulate_phase(const std::vector<double>& times, const std::vector<double>& mu0,
                                     const std::vector<double>& mu1, long atoms) {
  if (mu0.size() != mu1.size()) throw ArgumentError("phase accumulation needs aligned energy series");
  std::vector<double> delta(mu0.size());
  for (std::size_t k = 0; k < mu0.size(); ++k) delta[k] = mu0[k] - mu1[k];
  return accumulate_phase(times, delta, atoms);
}

std::vector<double> adiabaticity_profile(const RampSchedule& ramp,
                                         const std::vector<TrapCharacterization>& traps) {
  ramp.validate();
  if (traps.size() != ramp.steps) {
    throw ArgumentError(fmt::format("trap trace has {} entries for {} ramp steps", traps.size(), ramp.steps));
  }
  const std::size_t n = traps.size();
  std::vector<double> out(n, 0.0);
  const auto w = [&](std::size_t k) { return traps[k].frequencies[0]; };
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? k : k + 1;
    const double dw = (w(hi) - w(lo)) / (ramp.time_at(hi) - ramp.time_at(lo));
    out[k] = std::abs(dw) / (w(k) * w(k));
  }
  return out;
}

double adiabaticity_margin(const RampSchedule& ramp, const std::vector<TrapCharacterization>& traps) {
  const std::vector<double> p = adiabaticity_profile(ramp, traps);
  return *std::max_element(p.begin(), p.end());
}

EntangledSystemState run_protocol(const ChipGeometry& base, const FluxLoopState& loop,
                                  const CondensateSpec& spec, const RampSchedule& ramp,
                                  const Vec3& trap_guess, const ProtocolOptions& options) {
  ramp.validate();
  spec.validate();
  const double sep_lo = std::min(ramp.start_separation, ramp.end_separation);
  const double sep_hi = std::max(ramp.start_separation, ramp.end_separation);

  EntangledSystemState state;
  state.atoms = spec.atoms;
  state.qubit = prepare_symmetric_superposition();

  std::optional<TransportTable> table;
  try {
    table.emplace(base, spec.atom, loop.loop, trap_guess, sep_lo, sep_hi, options.table_nodes);
  } catch (const Error& e) {
    throw ProtocolError(0, fmt::format("transport table: {}", e.what()));
  }

  std::vector<double> times, delta;
  Vec3 guess0{}, guess1{};
  for (std::size_t k = 0; k < ramp.steps; ++k) {
    const double t = ramp.time_at(k);
    const double sep = ramp.separation_at_time(t);
    try {
      const double by = table->bias_for(sep);
      const ChipGeometry g = base.with_bias({base.bias.x, by, base.bias.z});
      const FluxLoopState fls = with_external_flux(loop, external_flux(loop.loop, g));
      if (k == 0) {
        const TrapCharacterization bare = find_minimum(g, spec.atom, trap_guess * (base.bias.y / by), options.minimizer);
        std::tie(guess0, guess1) = branch_seeds(g, fls, bare.minimum);
      }
      const BranchEnergetics e = branch_energetics(g, fls, spec, guess0, guess1, options.minimizer);
      if (k == 0) {
        if (!(std::abs(e.mu0 - e.mu1) < 1e-3 * std::abs(e.mu0))) {
          throw ArgumentError(fmt::format(
              "initial branch energies differ by {:.3e} of mu0; start the ramp further away",
              std::abs(e.mu0 - e.mu1) / std::abs(e.mu0)));
        }
        for (auto& w : e.warnings) state.warnings.push_back(w);
      }
      guess0 = e.trap0.minimum;
      guess1 = e.trap1.minimum;
      times.push_back(t);
      delta.push_back(e.delta_mu);
      state.traps0.push_back(e.trap0);
      state.traps1.push_back(e.trap1);
      ProtocolSample s;
      s.time = t;
      s.separation = sep;
      s.y_bias = by;
      s.mu0 = e.mu0;
      s.mu1 = e.mu1;
      s.current_branch0 = fls.current_branch0;
      s.current_branch1 = fls.current_branch1;
      state.trace.push_back(s);
      if (k > 0) state.qubit = qubit_evolve(state.qubit, t - times[k - 1]);
    } catch (const ProtocolError&) {
      throw;
    } catch (const Error& e) {
      throw ProtocolError(k, e.what());
    }
  }

  const std::vector<double> phi = accumulate_phase(times, delta, spec.atoms);
  const std::vector<double> m0 = adiabaticity_profile(ramp, state.traps0);
  const std::vector<double> m1 = adiabaticity_profile(ramp, state.traps1);
  for (std::size_t k = 0; k < ramp.steps; ++k) {
    state.trace[k].phase = phi[k];
    state.trace[k].adiabatic_margin = std::max(m0[k], m1[k]);
    state.adiabatic_margin = std::max(state.adiabatic_margin, state.trace[k].adiabatic_margin);
  }
  state.phase = phi.back();
  if (!std::isfinite(state.phase)) throw ProtocolError(ramp.steps - 1, "accumulated phase is not finite");
  if (state.adiabatic_margin > options.adiabatic_threshold) {
    state.warnings.push_back(fmt::format("adiabaticity margin {:.3e} exceeds threshold {:.3e}",
                                         state.adiabatic_margin, options.adiabatic_threshold));
  }
  return state;
}

EntangledSystemState apply_phase_noise(EntangledSystemState state, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ArgumentError("phase noise sigma must be >= 0");
  state.phase_noise_sigma = sigma;
  return state;
}

EntangledSystemState apply_atom_loss(EntangledSystemState state) {
  if (state.atoms < 2) throw ArgumentError("atom loss needs N >= 2; no entangled pair would remain");
  state.atoms -= 1;
  state.lost_atom = true;
  return state;
}

}  // namespace scbec
