#pragma once

#include <cmath>
#include <ostream>

namespace scbec {

/// Three-vector over an arbitrary scalar (double, or Jet for derivatives).
template <typename T>
struct BasicVec3 {
  T x{};
  T y{};
  T z{};

  constexpr BasicVec3& operator+=(const BasicVec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr BasicVec3& operator-=(const BasicVec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  template <typename S>
  constexpr BasicVec3& operator*=(const S& s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
};

template <typename T>
constexpr BasicVec3<T> operator+(BasicVec3<T> a, const BasicVec3<T>& b) {
  return a += b;
}
template <typename T>
constexpr BasicVec3<T> operator-(BasicVec3<T> a, const BasicVec3<T>& b) {
  return a -= b;
}
template <typename T>
constexpr BasicVec3<T> operator-(const BasicVec3<T>& a) {
  return {-a.x, -a.y, -a.z};
}
template <typename T, typename S>
constexpr BasicVec3<T> operator*(BasicVec3<T> a, const S& s) {
  return a *= s;
}
template <typename T, typename S>
constexpr BasicVec3<T> operator*(const S& s, BasicVec3<T> a) {
  return a *= s;
}
template <typename T>
constexpr T dot(const BasicVec3<T>& a, const BasicVec3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
template <typename T>
constexpr BasicVec3<T> cross(const BasicVec3<T>& a, const BasicVec3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
template <typename T>
T norm(const BasicVec3<T>& a) {
  using std::sqrt;
  return sqrt(dot(a, a));
}

using Vec3 = BasicVec3<double>;

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

inline bool operator==(const Vec3& a, const Vec3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

}  // namespace scbec
