#include "scbec/fluxloop.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "scbec/constants.hpp"
#include "scbec/detail/quadrature.hpp"
#include "scbec/errors.hpp"

namespace scbec {

double self_inductance(double loop_radius, double wire_radius) {
  if (!(loop_radius > 0.0) || !(wire_radius > 0.0)) {
    throw ArgumentError("loop and wire radius must be positive");
  }
  if (!(wire_radius < 0.5 * loop_radius)) {
    throw ArgumentError("thin-wire inductance needs wire radius < loop radius / 2");
  }
  return constants::mu0 * loop_radius * (std::log(8.0 * loop_radius / wire_radius) - 2.0);
}

double external_flux(const CurrentLoop& loop, const ChipGeometry& g) {
  const auto [u, v] = loop.plane_axes();
  const Vec3& n = loop.normal();
  const Vec3& c = loop.center();
  const double R = loop.radius();

  const auto normal_field = [&](double r, double phi) {
    const Vec3 p = c + u * (r * std::cos(phi)) + v * (r * std::sin(phi));
    return dot(total_field(g, p), n);
  };

  // Tolerance scale from the field magnitude over the disc.
  double scale = norm(total_field(g, c));
  for (int k = 0; k < 8; ++k) {
    scale = std::max(scale, norm(total_field(g, loop.filament_point(k * constants::pi / 4.0))));
  }
  const double abs_tol = 1e-6 * std::max(scale, 1e-30) * constants::pi * R * R;

  bool converged = true;
  const auto ring = [&](double r) {
    // Inner error e contributes e R^2 / 2 to the disc integral.
    const auto res = detail::integrate([&](double phi) { return normal_field(r, phi); }, 0.0,
                                       2.0 * constants::pi, 0.2 * abs_tol / (R * R));
    converged = converged && res.converged;
    return r * res.value;
  };
  const auto outer = detail::integrate(ring, 0.0, R, abs_tol);
  if (!outer.converged || !converged) {
    throw ConvergenceError(
        fmt::format("flux quadrature did not reach 1e-6 relative (error estimate {:.3e} Wb)",
                    outer.error));
  }
  return outer.value;
}

std::pair<CurrentLoop, CurrentLoop> FluxLoopState::branch_loops() const {
  return {loop.with_current(current_branch0), loop.with_current(current_branch1)};
}

double persistent_current(const FluxLoopState& state, int n) {
  return (n * constants::flux_quantum - state.external_flux) / state.self_inductance;
}

FluxLoopState with_external_flux(FluxLoopState state, double flux) {
  state.external_flux = flux;
  state.current_branch0 = persistent_current(state, state.branch_n0);
  state.current_branch1 = persistent_current(state, state.branch_n1);
  return state;
}

FluxLoopState make_flux_loop_state(const CurrentLoop& loop, double wire_radius, const ChipGeometry& g,
                                   int n0, int n1) {
  FluxLoopState s{loop.with_current(0.0), wire_radius, self_inductance(loop.radius(), wire_radius),
                  0.0, n0, n1, 0.0, 0.0};
  return with_external_flux(s, external_flux(loop, g));
}

double half_flux_quantum_bias(double loop_radius) {
  if (!(loop_radius > 0.0)) throw ArgumentError("loop radius must be positive");
  return constants::flux_quantum / (2.0 * constants::pi * loop_radius * loop_radius);
}

QubitState qubit_evolve(const QubitState& q, double dt) {
  if (!(dt >= 0.0)) throw ArgumentError("qubit evolution time must be non-negative");
  // exp(-i H dt/hbar) = exp(-i E0 dt/hbar) [cos(theta) I - i sin(theta) sigma_x]
  const double theta = q.tunnel * dt / constants::hbar;
  const std::complex<double> global = std::polar(1.0, -q.energy * dt / constants::hbar);
  const std::complex<double> a = global * std::cos(theta);
  const std::complex<double> b = global * std::complex<double>(0.0, -std::sin(theta));
  QubitState out = q;
  out.c0 = a * q.c0 + b * q.c1;
  out.c1 = b * q.c0 + a * q.c1;
  return out;
}

QubitState prepare_symmetric_superposition() {
  const double amp = 1.0 / std::sqrt(2.0);
  return {{amp, 0.0}, {amp, 0.0}, 0.0, 0.0};
}

CriticalFieldReport critical_field_check(const ChipGeometry& g, const CurrentLoop& loop,
                                         double critical_field, std::size_t samples) {
  if (!(critical_field > 0.0)) throw ArgumentError("critical field must be positive");
  if (samples == 0) throw ArgumentError("critical field check needs at least one sample");
  CriticalFieldReport r;
  r.critical_field = critical_field;
  r.samples = samples;
  for (std::size_t k = 0; k < samples; ++k) {
    const double phi = 2.0 * constants::pi * static_cast<double>(k) / static_cast<double>(samples);
    r.max_field = std::max(r.max_field, norm(total_field(g, loop.filament_point(phi))));
  }
  r.pass = r.max_field < critical_field;
  return r;
}

}  // namespace scbec
