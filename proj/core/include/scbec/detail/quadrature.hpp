#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace scbec::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
void gk15(const F& f, double a, double b, double& kronrod, double& gauss) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  kronrod = fc * kKronrodWeights[7];
  gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double sum = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  kronrod *= h;
  gauss *= h;
}

/// Adaptive bisection with the G7-K15 pair. A panel is accepted when its
/// Gauss-Kronrod difference is below its share of `abs_tol`.
template <typename F>
QuadratureResult integrate(const F& f, double a, double b, double abs_tol, int max_depth = 30) {
  double k = 0.0, g = 0.0;
  gk15(f, a, b, k, g);
  const double err = std::abs(k - g);
  if (err <= abs_tol) return {k, err, true};
  if (max_depth == 0) return {k, err, false};
  const double m = 0.5 * (a + b);
  const QuadratureResult left = integrate(f, a, m, 0.5 * abs_tol, max_depth - 1);
  const QuadratureResult right = integrate(f, m, b, 0.5 * abs_tol, max_depth - 1);
  return {left.value + right.value, left.error + right.error, left.converged && right.converged};
}

}  // namespace scbec::detail
