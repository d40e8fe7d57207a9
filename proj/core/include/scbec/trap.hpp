#pragma once

#include <Eigen/Core>

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "scbec/magnetostatics.hpp"

namespace scbec {

/// Magnetically trappable atom in a weak-field-seeking hyperfine state.
struct AtomSpecies {
  double mass = 0.0;               // kg
  double g_f = 0.0;
  int m_f = 0;
  double scattering_length = 0.0;  // m
  std::string label;

  /// 87Rb in |F = 2, mF = 2>.
  static AtomSpecies rb87();

  /// mF gF muB, the Zeeman energy per unit field (J/T).
  double magnetic_moment() const;
  /// Throws ArgumentError unless mass > 0 and gF mF > 0.
  void validate() const;
};

/// U = mF gF muB |B|.
double zeeman_potential(const Vec3& field, const AtomSpecies& atom);

struct TrapCharacterization {
  Vec3 minimum{};
  double field_at_minimum = 0.0;              // T
  std::array<double, 3> frequencies{};        // rad/s, ascending
  Eigen::Matrix3d principal_axes = Eigen::Matrix3d::Identity();  // columns
  bool converged = false;
  int iterations = 0;
};

struct MinimizerOptions {
  double simplex_step = 1e-6;        // m
  double simplex_xtol = 1e-10;       // m
  int max_iterations = 10000;
  double gradient_tolerance = 1e-11;  // T/m on |B|
  int newton_iterations = 60;
};

/// Local minimum of |B| near `guess`: simplex descent, then a Newton polish on
/// |B|^2 using exact field derivatives. Populates minimum and field.
/// Throws ConvergenceError (carrying the best iterate in its message) if the
/// gradient criterion is not met.
TrapCharacterization find_minimum(const ChipGeometry& g, const AtomSpecies& atom,
                                  const Vec3& guess, const MinimizerOptions& options = {});

/// Harmonic frequencies sqrt(lambda_i / m) from the Hessian of the Zeeman
/// potential at a converged minimum. Throws NotATrapError on a zero trap
/// bottom or any non-positive curvature.
TrapCharacterization trap_frequencies(const ChipGeometry& g, const AtomSpecies& atom,
                                      TrapCharacterization c);

/// find_minimum followed by trap_frequencies.
TrapCharacterization characterize_trap(const ChipGeometry& g, const AtomSpecies& atom,
                                       const Vec3& guess, const MinimizerOptions& options = {});

/// Central-difference Hessian of |B| (T/m^2) with step h; a finite-difference
/// cross-check of the exact curvature used by trap_frequencies.
Eigen::Matrix3d magnitude_hessian_fd(const ChipGeometry& g, const Vec3& p, double h = 1e-8);

/// Sampling line: origin + s * direction for s in [-half_span, half_span].
struct AxialLine {
  Vec3 origin{};
  Vec3 direction{1.0, 0.0, 0.0};
  double half_span = 3e-5;
};

struct AxialProfile {
  std::vector<double> positions;  // m, offset along the line
  std::vector<double> unperturbed;
  std::vector<double> branch0;
  std::vector<double> branch1;
};

/// |B| along `line` without the loop and with each branch loop added.
AxialProfile axial_profile(const ChipGeometry& base, const std::pair<CurrentLoop, CurrentLoop>& branches,
                           const AxialLine& line, std::size_t samples);

}  // namespace scbec
