#include "scbec/trap.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "scbec/constants.hpp"
#include "scbec/detail/field_kernels.hpp"
#include "scbec/detail/nelder_mead.hpp"
#include "scbec/errors.hpp"

namespace scbec {

AtomSpecies AtomSpecies::rb87() {
  return {constants::rb87_mass, 0.5, 2, constants::rb87_scattering_length, "87Rb |F=2,mF=2>"};
}

double AtomSpecies::magnetic_moment() const { return m_f * g_f * constants::bohr_magneton; }

void AtomSpecies::validate() const {
  if (!(mass > 0.0)) throw ArgumentError("atom mass must be positive");
  if (!(g_f * m_f > 0.0)) throw ArgumentError("atom must be weak-field seeking (gF mF > 0)");
  if (!(scattering_length > 0.0)) throw ArgumentError("scattering length must be positive");
}

double zeeman_potential(const Vec3& field, const AtomSpecies& atom) {
  return atom.magnetic_moment() * norm(field);
}

namespace {

Vec3 to_vec(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }
Eigen::Vector3d to_eigen(const Vec3& v) { return {v.x, v.y, v.z}; }

struct Objective {
  double value;  // |B|^2 / 2
  double magnitude;
  Eigen::Vector3d gradient;
  Eigen::Matrix3d hessian;
};

Objective half_square(const ChipGeometry& g, const Vec3& p) {
  // Extended precision: at the trap bottom the gradient is a cancellation of
  // terms ~1e-4 T^2/m, and its round-off sets how well the minimum is located.
  using LJet = BasicJet<long double>;
  const BasicVec3<LJet> pj{LJet::variable(p.x, 0), LJet::variable(p.y, 1), LJet::variable(p.z, 2)};
  const BasicVec3<LJet> b = detail::total_field<LJet>(g, pj);
  const LJet q = 0.5L * dot(b, b);
  Objective o;
  o.value = static_cast<double>(q.v);
  o.magnitude = static_cast<double>(std::sqrt(2.0L * q.v));
  for (std::size_t i = 0; i < 3; ++i) {
    o.gradient(static_cast<int>(i)) = static_cast<double>(q.g[i]);
    for (std::size_t k = 0; k < 3; ++k) {
      o.hessian(static_cast<int>(i), static_cast<int>(k)) = static_cast<double>(q.h[i][k]);
    }
  }
  return o;
}

// Gradient of |B| implied by the gradient of |B|^2 / 2; zero on a field zero.
double magnitude_gradient_norm(const Objective& o) {
  return o.magnitude > 0.0 ? o.gradient.norm() / o.magnitude : 0.0;
}

}  // namespace

TrapCharacterization find_minimum(const ChipGeometry& g, const AtomSpecies& atom, const Vec3& guess,
                                  const MinimizerOptions& options) {
  atom.validate();
  const auto magnitude = [&](const Eigen::Vector3d& p) { return norm(total_field(g, to_vec(p))); };
  const detail::SimplexResult simplex =
      detail::nelder_mead(magnitude, to_eigen(guess), options.simplex_step, options.simplex_xtol,
                          options.max_iterations);

  // Newton polish of |B|^2 / 2 (smooth even where |B| has a conical zero).
  Eigen::Vector3d p = simplex.best;
  Objective o = half_square(g, to_vec(p));
  const auto met = [&](const Objective& x) {
    return magnitude_gradient_norm(x) < options.gradient_tolerance || x.magnitude < 1e-15;
  };
  bool converged = false;
  int polish = 0;
  int it = 0;
  for (; it < options.newton_iterations; ++it) {
    if (met(o)) {
      converged = true;
      // Two further steps take the minimum down to the round-off floor, which
      // mirror-symmetric branch pairs need.
      if (o.magnitude < 1e-15 || polish++ == 2) break;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(o.hessian);
    const Eigen::Vector3d lambda = eig.eigenvalues();
    const double scale = lambda.cwiseAbs().maxCoeff();
    Eigen::Vector3d coeff = eig.eigenvectors().transpose() * o.gradient;
    for (int k = 0; k < 3; ++k) {
      // Flat or negative directions are left alone; the simplex has already
      // placed us in the basin.
      coeff(k) = lambda(k) > 1e-12 * scale ? -coeff(k) / lambda(k) : 0.0;
    }
    Eigen::Vector3d step = eig.eigenvectors() * coeff;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      const Eigen::Vector3d trial = p + step;
      const Objective ot = half_square(g, to_vec(trial));
      // Near the minimum the decrease of |B|^2/2 drops below round-off, so a
      // shrinking gradient is accepted as long as the value does not rise
      // beyond that noise.
      const bool descent = ot.value < o.value;
      const bool flatter = ot.gradient.norm() < o.gradient.norm() && ot.value <= o.value * (1.0 + 1e-12);
      if (descent || flatter) {
        p = trial;
        o = ot;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      converged = met(o);
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError(fmt::format(
        "trap minimum search did not converge after {} simplex and {} Newton iterations; best "
        "iterate ({:.9e}, {:.9e}, {:.9e}) m, |B| = {:.9e} T, |grad|B|| = {:.3e} T/m",
        simplex.iterations, it, p(0), p(1), p(2), o.magnitude, magnitude_gradient_norm(o)));
  }

  TrapCharacterization c;
  c.minimum = to_vec(p);
  c.field_at_minimum = field_magnitude_extended(g, c.minimum);
  c.converged = true;
  c.iterations = simplex.iterations + it;
  return c;
}

TrapCharacterization trap_frequencies(const ChipGeometry& g, const AtomSpecies& atom,
                                      TrapCharacterization c) {
  atom.validate();
  if (!c.converged) throw ArgumentError("trap frequencies need a converged minimum");
  const FieldMagnitudeDerivatives d = field_magnitude_derivatives(g, c.minimum);
  if (!(d.magnitude > 1e-15) || !d.hessian.allFinite()) {
    throw NotATrapError(fmt::format("zero field at the trap minimum ({:.9e}, {:.9e}, {:.9e}) m, |B| = {:.3e} T",
                                    c.minimum.x, c.minimum.y, c.minimum.z, d.magnitude));
  }
  const Eigen::Matrix3d curvature = atom.magnetic_moment() * d.hessian;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(curvature);
  const Eigen::Vector3d lambda = eig.eigenvalues();
  for (int k = 0; k < 3; ++k) {
    if (!(lambda(k) > 0.0)) {
      throw NotATrapError(fmt::format("non-positive potential curvature {:.6e} J/m^2 at ({:.9e}, "
                                      "{:.9e}, {:.9e}) m",
                                      lambda(k), c.minimum.x, c.minimum.y, c.minimum.z));
    }
    c.frequencies[static_cast<std::size_t>(k)] = std::sqrt(lambda(k) / atom.mass);
  }
  c.principal_axes = eig.eigenvectors();
  c.field_at_minimum = field_magnitude_extended(g, c.minimum);
  return c;
}

TrapCharacterization characterize_trap(const ChipGeometry& g, const AtomSpecies& atom,
                                       const Vec3& guess, const MinimizerOptions& options) {
  return trap_frequencies(g, atom, find_minimum(g, atom, guess, options));
}

Eigen::Matrix3d magnitude_hessian_fd(const ChipGeometry& g, const Vec3& p, double h) {
  if (!(h > 0.0)) throw ArgumentError("Hessian step must be positive");
  const auto f = [&](double dx, double dy, double dz) {
    return norm(total_field(g, p + Vec3{dx, dy, dz}));
  };
  const auto shift = [h](int axis, double sign) {
    std::array<double, 3> s{0.0, 0.0, 0.0};
    s[static_cast<std::size_t>(axis)] = sign * h;
    return s;
  };
  Eigen::Matrix3d H;
  const double f0 = f(0, 0, 0);
  for (int i = 0; i < 3; ++i) {
    const auto ip = shift(i, 1.0), im = shift(i, -1.0);
    H(i, i) = (f(ip[0], ip[1], ip[2]) - 2.0 * f0 + f(im[0], im[1], im[2])) / (h * h);
    for (int j = i + 1; j < 3; ++j) {
      const auto jp = shift(j, 1.0), jm = shift(j, -1.0);
      const double fpp = f(ip[0] + jp[0], ip[1] + jp[1], ip[2] + jp[2]);
      const double fpm = f(ip[0] + jm[0], ip[1] + jm[1], ip[2] + jm[2]);
      const double fmp = f(im[0] + jp[0], im[1] + jp[1], im[2] + jp[2]);
      const double fmm = f(im[0] + jm[0], im[1] + jm[1], im[2] + jm[2]);
      H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return H;
}

AxialProfile axial_profile(const ChipGeometry& base, const std::pair<CurrentLoop, CurrentLoop>& branches,
                           const AxialLine& line, std::size_t samples) {
  if (samples < 2) throw ArgumentError("axial profile needs at least two samples");
  if (!(line.half_span > 0.0)) throw ArgumentError("axial profile half span must be positive");
  const double dir_len = norm(line.direction);
  if (!(dir_len > 0.0)) throw ArgumentError("axial profile direction has zero length");
  const Vec3 dir = line.direction * (1.0 / dir_len);
  const ChipGeometry g0 = base.with_loop(branches.first);
  const ChipGeometry g1 = base.with_loop(branches.second);

  AxialProfile out;
  out.positions.reserve(samples);
  const double step = 2.0 * line.half_span / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = -line.half_span + step * static_cast<double>(i);
    const Vec3 p = line.origin + dir * s;
    try {
      out.positions.push_back(s);
      out.unperturbed.push_back(norm(total_field(base, p)));
      out.branch0.push_back(norm(total_field(g0, p)));
      out.branch1.push_back(norm(total_field(g1, p)));
    } catch (const SingularPointError& e) {
      throw SingularPointError(fmt::format("axial profile sample {}: {}", i, e.what()));
    }
  }
  return out;
}

}  // namespace scbec
