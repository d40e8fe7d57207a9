#pragma once

#include <Eigen/Core>

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "scbec/vec3.hpp"

namespace scbec {

/// Points closer than this to a filament are rejected as singular (m).
inline constexpr double kSingularGuard = 1e-12;

/// Straight filament carrying `current` from `start` to `end`.
class WireSegment {
 public:
  WireSegment(Vec3 start, Vec3 end, double current);

  const Vec3& start() const { return start_; }
  const Vec3& end() const { return end_; }
  double current() const { return current_; }
  double length() const;

  WireSegment with_current(double current) const { return {start_, end_, current}; }

 private:
  Vec3 start_;
  Vec3 end_;
  double current_;
};

/// Circular filament. Positive current circulates right-handed about `normal`.
class CurrentLoop {
 public:
  /// `normal` must already be a unit vector (to 1e-12).
  CurrentLoop(Vec3 center, double radius, Vec3 normal, double current);

  /// Normalises `direction` before constructing.
  static CurrentLoop oriented(Vec3 center, double radius, Vec3 direction, double current);

  const Vec3& center() const { return center_; }
  double radius() const { return radius_; }
  const Vec3& normal() const { return normal_; }
  double current() const { return current_; }

  CurrentLoop with_current(double current) const { return {center_, radius_, normal_, current}; }
  CurrentLoop with_center(const Vec3& center) const { return {center, radius_, normal_, current_}; }

  /// Point on the filament at azimuth `phi` (rad) in the loop's own frame.
  Vec3 filament_point(double phi) const;
  /// In-plane unit vectors (u, v) completing a right-handed frame with normal.
  std::pair<Vec3, Vec3> plane_axes() const;

 private:
  Vec3 center_;
  double radius_;
  Vec3 normal_;
  double current_;
};

/// Every magnetostatic source on the chip: wires, loops and a uniform bias.
struct ChipGeometry {
  std::vector<WireSegment> segments;
  std::vector<CurrentLoop> loops;
  Vec3 bias{};

  /// Every current and the bias multiplied by `factor`.
  ChipGeometry scaled(double factor) const;
  ChipGeometry with_loop(const CurrentLoop& loop) const;
  ChipGeometry with_bias(const Vec3& bias) const;
  /// Union of sources; biases add.
  ChipGeometry merged(const ChipGeometry& other) const;
};

/// Shape of the Z-shaped trapping wire.
struct ZWireSpec {
  double bar_length = 5e-3;   // m, central bar along x centred on the origin
  double lead_length = 2e-3;  // m
  double current = 5.0;       // A, flowing +x along the bar
};

/// Z wire in the chip plane (z = 0): the lead at the bar start extends along
/// -y, the lead at the bar end along +y, so both lead fields add to a +x bias
/// at the trap bottom.
std::vector<WireSegment> make_z_wire(const ZWireSpec& spec);

Vec3 segment_field(const WireSegment& seg, const Vec3& p);
Vec3 loop_field(const CurrentLoop& loop, const Vec3& p);
Vec3 total_field(const ChipGeometry& g, const Vec3& p);

/// |B| with every source summed in extended precision. Trap bottoms sit on a
/// near-cancellation of wire and bias fields; this keeps their round-off well
/// below 1e-15 relative.
double field_magnitude_extended(const ChipGeometry& g, const Vec3& p);

/// Central-difference Jacobian J(i, j) = dB_i/dx_j with step h (m).
Eigen::Matrix3d field_jacobian(const ChipGeometry& g, const Vec3& p, double h = 1e-8);

/// Exact (forward-mode) derivatives of the total field at p.
struct FieldDerivatives {
  Vec3 field;
  Eigen::Matrix3d jacobian;                 // dB_i/dx_j
  std::array<Eigen::Matrix3d, 3> hessians;  // d2B_i/dx_j dx_k for i = x, y, z
};
FieldDerivatives field_derivatives(const ChipGeometry& g, const Vec3& p);

/// |B| together with its exact gradient (T/m) and Hessian (T/m^2).
struct FieldMagnitudeDerivatives {
  double magnitude = 0.0;
  Eigen::Vector3d gradient;
  Eigen::Matrix3d hessian;
};
FieldMagnitudeDerivatives field_magnitude_derivatives(const ChipGeometry& g, const Vec3& p);

}  // namespace scbec
