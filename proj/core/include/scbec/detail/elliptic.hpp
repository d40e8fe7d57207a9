#pragma once

#include <cmath>
#include <numbers>

#include "scbec/jet.hpp"

namespace scbec::detail {

template <typename T>
struct EllipticPair {
  T K;
  T E;
};

/// Complete elliptic integrals K(m), E(m) of parameter m = k^2 in [0, 1) by
/// the arithmetic-geometric mean. Iterates until the AGM gap is below 1e-15
/// of the mean, then once more so derivative parts settle too.
template <typename T>
EllipticPair<T> complete_elliptic(const T& m) {
  using std::abs;
  using std::sqrt;
  T a(1.0);
  T b = sqrt(1.0 - m);
  T sum = 0.5 * m;
  double weight = 0.5;
  bool settled = false;
  for (int it = 0; it < 64; ++it) {
    const T c = 0.5 * (a - b);
    const T a_next = 0.5 * (a + b);
    b = sqrt(a * b);
    a = a_next;
    weight *= 2.0;
    sum += weight * (c * c);
    if (settled) break;
    if (std::abs(value_of(c)) <= 1e-15 * std::abs(value_of(a))) settled = true;
  }
  const T K = (0.5 * std::numbers::pi) / a;
  return {K, K * (1.0 - sum)};
}

}  // namespace scbec::detail
