#pragma once

#include <cmath>
#include <string>

#include "scbec/constants.hpp"
#include "scbec/detail/elliptic.hpp"
#include "scbec/errors.hpp"
#include "scbec/jet.hpp"
#include "scbec/magnetostatics.hpp"

namespace scbec::detail {

template <typename T>
BasicVec3<T> lift(const Vec3& v) {
  return {T(v.x), T(v.y), T(v.z)};
}

/// Closed-form Biot-Savart field of a finite straight filament.
template <typename T>
BasicVec3<T> segment_field(const WireSegment& seg, const BasicVec3<T>& p) {
  using std::sqrt;
  const Vec3 axis = seg.end() - seg.start();
  const double len = norm(axis);
  const Vec3 u = axis * (1.0 / len);
  const BasicVec3<T> r1 = p - lift<T>(seg.start());
  const BasicVec3<T> r2 = p - lift<T>(seg.end());
  const BasicVec3<T> c = cross(lift<T>(u), r1);
  const T rho2 = dot(c, c);
  const T along = dot(r1, lift<T>(u));
  if (value_of(rho2) < kSingularGuard * kSingularGuard) {
    if (value_of(along) >= -kSingularGuard && value_of(along) <= len + kSingularGuard) {
      throw SingularPointError("evaluation point lies on a wire segment");
    }
    return {};
  }
  const T f = along / sqrt(dot(r1, r1)) - dot(r2, lift<T>(u)) / sqrt(dot(r2, r2));
  const T scale = (constants::mu0 * seg.current() / (4.0 * constants::pi)) * f / rho2;
  return c * scale;
}

/// Field of a circular filament. Off axis: complete elliptic integrals.
/// Within 1e-3 R of the axis: the on-axis expansion to fourth order in the
/// radial offset, which stays smooth for derivative evaluation.
template <typename T>
BasicVec3<T> loop_field(const CurrentLoop& loop, const BasicVec3<T>& p) {
  using std::sqrt;
  const auto [u, v] = loop.plane_axes();
  const Vec3& n = loop.normal();
  const double R = loop.radius();
  const BasicVec3<T> d = p - lift<T>(loop.center());
  const T x = dot(d, lift<T>(u));
  const T y = dot(d, lift<T>(v));
  const T z = dot(d, lift<T>(n));
  const T rho2 = x * x + y * y;

  T bz;
  T brho_over_rho;
  if (value_of(rho2) < 1e-6 * R * R) {
    const double c0 = 0.5 * constants::mu0 * loop.current() * R * R;
    const T w = R * R + z * z;
    const T inv_sqrt = 1.0 / sqrt(w);
    const T inv = inv_sqrt * inv_sqrt;
    const T p3 = inv * inv_sqrt;  // w^{-3/2}
    const T p5 = p3 * inv;
    const T p7 = p5 * inv;
    const T p9 = p7 * inv;
    const T p11 = p9 * inv;
    const T z2 = z * z;
    const T f0 = p3;
    const T f1 = -3.0 * z * p5;
    const T f2 = -3.0 * p5 + 15.0 * z2 * p7;
    const T f3 = 45.0 * z * p7 - 105.0 * z2 * z * p9;
    const T f4 = 45.0 * p7 - 630.0 * z2 * p9 + 945.0 * z2 * z2 * p11;
    bz = c0 * (f0 - 0.25 * rho2 * f2 + (1.0 / 64.0) * rho2 * rho2 * f4);
    brho_over_rho = c0 * (-0.5 * f1 + (1.0 / 16.0) * rho2 * f3);
  } else {
    const T rho = sqrt(rho2);
    const T r2 = rho2 + z * z;
    const T alpha2 = R * R + r2 - 2.0 * R * rho;
    if (value_of(alpha2) < kSingularGuard * kSingularGuard) {
      throw SingularPointError("evaluation point lies on a current loop");
    }
    const T beta2 = alpha2 + 4.0 * R * rho;
    const T beta = sqrt(beta2);
    const auto [K, E] = complete_elliptic<T>(1.0 - alpha2 / beta2);
    const double C = constants::mu0 * loop.current() / constants::pi;
    const T denom = 2.0 * alpha2 * beta;
    bz = (C / denom) * ((R * R - r2) * E + alpha2 * K);
    brho_over_rho = (C * z / (denom * rho2)) * ((R * R + r2) * E - alpha2 * K);
  }
  const T bx = brho_over_rho * x;
  const T by = brho_over_rho * y;
  return lift<T>(u) * bx + lift<T>(v) * by + lift<T>(n) * bz;
}

template <typename T>
BasicVec3<T> total_field(const ChipGeometry& g, const BasicVec3<T>& p) {
  BasicVec3<T> b = lift<T>(g.bias);
  for (std::size_t i = 0; i < g.segments.size(); ++i) {
    try {
      b += segment_field<T>(g.segments[i], p);
    } catch (const SingularPointError& e) {
      throw SingularPointError(std::string(e.what()) + " (segment " + std::to_string(i) + ")");
    }
  }
  for (std::size_t i = 0; i < g.loops.size(); ++i) {
    try {
      b += loop_field<T>(g.loops[i], p);
    } catch (const SingularPointError& e) {
      throw SingularPointError(std::string(e.what()) + " (loop " + std::to_string(i) + ")");
    }
  }
  return b;
}

}  // namespace scbec::detail
