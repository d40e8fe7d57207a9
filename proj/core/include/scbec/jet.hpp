#pragma once

#include <array>
#include <cmath>
#include <concepts>

namespace scbec {

/// Second-order forward-mode number over three spatial variables.
///
/// Carries a value together with its exact gradient and Hessian with respect
/// to (x, y, z). The field kernels are templated on their scalar type, so
/// evaluating them on Jets yields analytic field derivatives without finite
/// differencing. Comparisons look at the value only.
template <typename T>
struct BasicJet {
  T v = 0;
  std::array<T, 3> g{};
  std::array<std::array<T, 3>, 3> h{};

  constexpr BasicJet() = default;
  constexpr BasicJet(T value) : v(value) {}  // NOLINT: implicit lift of constants

  /// Independent variable number `axis` with the given value.
  static constexpr BasicJet variable(T value, int axis) {
    BasicJet j(value);
    j.g[static_cast<std::size_t>(axis)] = 1;
    return j;
  }

  constexpr BasicJet& operator+=(const BasicJet& o) {
    v += o.v;
    for (std::size_t i = 0; i < 3; ++i) {
      g[i] += o.g[i];
      for (std::size_t k = 0; k < 3; ++k) h[i][k] += o.h[i][k];
    }
    return *this;
  }
  constexpr BasicJet& operator-=(const BasicJet& o) {
    v -= o.v;
    for (std::size_t i = 0; i < 3; ++i) {
      g[i] -= o.g[i];
      for (std::size_t k = 0; k < 3; ++k) h[i][k] -= o.h[i][k];
    }
    return *this;
  }
  constexpr BasicJet& operator*=(T s) {
    v *= s;
    for (std::size_t i = 0; i < 3; ++i) {
      g[i] *= s;
      for (std::size_t k = 0; k < 3; ++k) h[i][k] *= s;
    }
    return *this;
  }
  constexpr BasicJet& operator*=(const BasicJet& o) {
    BasicJet r;
    r.v = v * o.v;
    for (std::size_t i = 0; i < 3; ++i) {
      r.g[i] = g[i] * o.v + v * o.g[i];
      for (std::size_t k = 0; k < 3; ++k)
        r.h[i][k] = h[i][k] * o.v + g[i] * o.g[k] + o.g[i] * g[k] + v * o.h[i][k];
    }
    return *this = r;
  }
  constexpr BasicJet& operator/=(T s) { return *this *= (T(1) / s); }
  constexpr BasicJet& operator/=(const BasicJet& o) {
    const T inv = T(1) / o.v;
    return *this *= chain(o, inv, -inv * inv, 2 * inv * inv * inv);
  }

  /// Chain rule for a scalar function with value f0, derivative f1 and
  /// second derivative f2 at a.v.
  friend constexpr BasicJet chain(const BasicJet& a, T f0, T f1, T f2) {
    BasicJet r(f0);
    for (std::size_t i = 0; i < 3; ++i) {
      r.g[i] = f1 * a.g[i];
      for (std::size_t k = 0; k < 3; ++k) r.h[i][k] = f1 * a.h[i][k] + f2 * a.g[i] * a.g[k];
    }
    return r;
  }

  friend constexpr BasicJet operator+(BasicJet a, const BasicJet& b) { return a += b; }
  friend constexpr BasicJet operator-(BasicJet a, const BasicJet& b) { return a -= b; }
  friend constexpr BasicJet operator*(BasicJet a, const BasicJet& b) { return a *= b; }
  friend constexpr BasicJet operator/(BasicJet a, const BasicJet& b) { return a /= b; }
  friend constexpr BasicJet operator*(BasicJet a, T s) { return a *= s; }
  friend constexpr BasicJet operator*(T s, BasicJet a) { return a *= s; }
  friend constexpr BasicJet operator/(BasicJet a, T s) { return a /= s; }
  friend constexpr BasicJet operator/(T s, const BasicJet& b) {
    const T inv = T(1) / b.v;
    return chain(b, s * inv, -s * inv * inv, 2 * s * inv * inv * inv);
  }
  friend constexpr BasicJet operator+(BasicJet a, T s) {
    a.v += s;
    return a;
  }
  friend constexpr BasicJet operator+(T s, BasicJet a) { return a + s; }
  friend constexpr BasicJet operator-(BasicJet a, T s) {
    a.v -= s;
    return a;
  }
  friend constexpr BasicJet operator-(T s, const BasicJet& a) { return (a * T(-1)) + s; }
  friend constexpr BasicJet operator-(BasicJet a) { return a *= T(-1); }

  friend constexpr bool operator<(const BasicJet& a, const BasicJet& b) { return a.v < b.v; }
  friend constexpr bool operator>(const BasicJet& a, const BasicJet& b) { return a.v > b.v; }

  friend BasicJet sqrt(const BasicJet& a) {
    const T s = std::sqrt(a.v);
    return chain(a, s, T(0.5) / s, T(-0.25) / (s * a.v));
  }
  friend BasicJet log(const BasicJet& a) {
    return chain(a, std::log(a.v), T(1) / a.v, T(-1) / (a.v * a.v));
  }
};

using Jet = BasicJet<double>;

/// Value part of a scalar; identity on plain floating-point numbers.
template <std::floating_point T>
constexpr T value_of(T x) {
  return x;
}
template <typename T>
constexpr T value_of(const BasicJet<T>& x) {
  return x.v;
}

}  // namespace scbec
