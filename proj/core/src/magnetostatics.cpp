#include "scbec/magnetostatics.hpp"

#include <cmath>

#include "scbec/detail/field_kernels.hpp"
#include "scbec/errors.hpp"

namespace scbec {

WireSegment::WireSegment(Vec3 start, Vec3 end, double current)
    : start_(start), end_(end), current_(current) {
  if (!is_finite(start) || !is_finite(end) || !std::isfinite(current)) {
    throw ArgumentError("wire segment with non-finite endpoint or current");
  }
  if (norm(end - start) <= 0.0) throw ArgumentError("wire segment of zero length");
}

double WireSegment::length() const { return norm(end_ - start_); }

CurrentLoop::CurrentLoop(Vec3 center, double radius, Vec3 normal, double current)
    : center_(center), radius_(radius), normal_(normal), current_(current) {
  if (!is_finite(center) || !is_finite(normal) || !std::isfinite(current) ||
      !std::isfinite(radius)) {
    throw ArgumentError("current loop with non-finite parameter");
  }
  if (radius <= 0.0) throw ArgumentError("current loop radius must be positive");
  if (std::abs(norm(normal) - 1.0) > 1e-12) throw ArgumentError("loop normal is not a unit vector");
}

CurrentLoop CurrentLoop::oriented(Vec3 center, double radius, Vec3 direction, double current) {
  const double len = norm(direction);
  if (!(len > 0.0)) throw ArgumentError("loop normal direction has zero length");
  return {center, radius, direction * (1.0 / len), current};
}

std::pair<Vec3, Vec3> CurrentLoop::plane_axes() const {
  // Seed with the coordinate axis least aligned with the normal; for a
  // z-normal loop this gives u = x, v = y.
  const Vec3& n = normal_;
  const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
  Vec3 seed{1.0, 0.0, 0.0};
  if (ay < ax && ay <= az) {
    seed = {0.0, 1.0, 0.0};
  } else if (az < ax && az < ay) {
    seed = {0.0, 0.0, 1.0};
  }
  Vec3 u = seed - n * dot(seed, n);
  u = u * (1.0 / norm(u));
  return {u, cross(n, u)};
}

Vec3 CurrentLoop::filament_point(double phi) const {
  const auto [u, v] = plane_axes();
  return center_ + u * (radius_ * std::cos(phi)) + v * (radius_ * std::sin(phi));
}

ChipGeometry ChipGeometry::scaled(double factor) const {
  ChipGeometry out;
  for (const auto& s : segments) out.segments.push_back(s.with_current(s.current() * factor));
  for (const auto& l : loops) out.loops.push_back(l.with_current(l.current() * factor));
  out.bias = bias * factor;
  return out;
}

ChipGeometry ChipGeometry::with_loop(const CurrentLoop& loop) const {
  ChipGeometry out = *this;
  out.loops.push_back(loop);
  return out;
}

ChipGeometry ChipGeometry::with_bias(const Vec3& b) const {
  ChipGeometry out = *this;
  out.bias = b;
  return out;
}

ChipGeometry ChipGeometry::merged(const ChipGeometry& other) const {
  ChipGeometry out = *this;
  out.segments.insert(out.segments.end(), other.segments.begin(), other.segments.end());
  out.loops.insert(out.loops.end(), other.loops.begin(), other.loops.end());
  out.bias += other.bias;
  return out;
}

std::vector<WireSegment> make_z_wire(const ZWireSpec& spec) {
  if (!(spec.bar_length > 0.0) || !(spec.lead_length > 0.0)) {
    throw ArgumentError("Z wire bar and lead lengths must be positive");
  }
  const double half = 0.5 * spec.bar_length;
  const Vec3 a{-half, -spec.lead_length, 0.0};
  const Vec3 b{-half, 0.0, 0.0};
  const Vec3 c{half, 0.0, 0.0};
  const Vec3 d{half, spec.lead_length, 0.0};
  return {{a, b, spec.current}, {b, c, spec.current}, {c, d, spec.current}};
}

Vec3 segment_field(const WireSegment& seg, const Vec3& p) {
  return detail::segment_field<double>(seg, p);
}

Vec3 loop_field(const CurrentLoop& loop, const Vec3& p) {
  return detail::loop_field<double>(loop, p);
}

Vec3 total_field(const ChipGeometry& g, const Vec3& p) { return detail::total_field<double>(g, p); }

double field_magnitude_extended(const ChipGeometry& g, const Vec3& p) {
  using L = long double;
  const BasicVec3<L> b = detail::total_field<L>(g, detail::lift<L>(p));
  return static_cast<double>(std::sqrt(dot(b, b)));
}

Eigen::Matrix3d field_jacobian(const ChipGeometry& g, const Vec3& p, double h) {
  if (!(h > 0.0)) throw ArgumentError("Jacobian step must be positive");
  Eigen::Matrix3d J;
  for (int j = 0; j < 3; ++j) {
    Vec3 dp{};
    (j == 0 ? dp.x : j == 1 ? dp.y : dp.z) = h;
    const Vec3 fwd = total_field(g, p + dp);
    const Vec3 bwd = total_field(g, p - dp);
    J(0, j) = (fwd.x - bwd.x) / (2.0 * h);
    J(1, j) = (fwd.y - bwd.y) / (2.0 * h);
    J(2, j) = (fwd.z - bwd.z) / (2.0 * h);
  }
  return J;
}

namespace {

template <typename J>
BasicVec3<J> seed_point(const Vec3& p) {
  return {J::variable(p.x, 0), J::variable(p.y, 1), J::variable(p.z, 2)};
}

}  // namespace

FieldDerivatives field_derivatives(const ChipGeometry& g, const Vec3& p) {
  const BasicVec3<Jet> b = detail::total_field<Jet>(g, seed_point<Jet>(p));
  FieldDerivatives out;
  out.field = {b.x.v, b.y.v, b.z.v};
  const Jet* comps[3] = {&b.x, &b.y, &b.z};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.jacobian(i, j) = comps[i]->g[j];
      for (int k = 0; k < 3; ++k) out.hessians[i](j, k) = comps[i]->h[j][k];
    }
  }
  return out;
}

FieldMagnitudeDerivatives field_magnitude_derivatives(const ChipGeometry& g, const Vec3& p) {
  // The axial curvature of |B| is ~1e-6 of the radial one; extended
  // precision keeps its relative round-off near 1e-13.
  using LJet = BasicJet<long double>;
  const BasicVec3<LJet> b = detail::total_field<LJet>(g, seed_point<LJet>(p));
  const LJet mag = sqrt(dot(b, b));
  FieldMagnitudeDerivatives out;
  out.magnitude = static_cast<double>(mag.v);
  for (std::size_t j = 0; j < 3; ++j) {
    out.gradient(static_cast<int>(j)) = static_cast<double>(mag.g[j]);
    for (std::size_t k = 0; k < 3; ++k) {
      out.hessian(static_cast<int>(j), static_cast<int>(k)) = static_cast<double>(mag.h[j][k]);
    }
  }
  return out;
}

}  // namespace scbec
