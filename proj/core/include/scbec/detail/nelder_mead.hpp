#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>

#include <Eigen/Core>

namespace scbec::detail {

struct SimplexResult {
  Eigen::Vector3d best;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead descent in three dimensions with the standard reflection,
/// expansion, contraction and shrink coefficients (1, 2, 1/2, 1/2).
/// Stops when every vertex lies within `xtol` of the best one.
inline SimplexResult nelder_mead(const std::function<double(const Eigen::Vector3d&)>& f,
                                 const Eigen::Vector3d& start, double step, double xtol,
                                 int max_iterations) {
  constexpr int n = 3;
  std::array<Eigen::Vector3d, n + 1> pts;
  std::array<double, n + 1> vals;
  pts[0] = start;
  for (int i = 0; i < n; ++i) {
    pts[i + 1] = start;
    pts[i + 1](i) += step;
  }
  for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  SimplexResult out;
  std::array<int, n + 1> order{0, 1, 2, 3};
  for (int it = 0; it < max_iterations; ++it) {
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order[0];
    const int worst = order[n];
    const int second = order[n - 1];

    double spread = 0.0;
    for (int i = 1; i <= n; ++i) spread = std::max(spread, (pts[order[i]] - pts[best]).norm());
    out.iterations = it;
    if (spread <= xtol) {
      out.converged = true;
      break;
    }

    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (int i = 0; i < n; ++i) centroid += pts[order[i]];
    centroid /= n;

    const Eigen::Vector3d reflected = centroid + (centroid - pts[worst]);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      const Eigen::Vector3d expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::Vector3d contracted =
        outside ? Eigen::Vector3d(centroid + 0.5 * (reflected - centroid))
                : Eigen::Vector3d(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = f(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      const int k = order[i];
      pts[k] = pts[best] + 0.5 * (pts[k] - pts[best]);
      vals[k] = f(pts[k]);
    }
  }
  const auto best_it = std::min_element(vals.begin(), vals.end());
  out.best = pts[static_cast<std::size_t>(best_it - vals.begin())];
  out.value = *best_it;
  return out;
}

}  // namespace scbec::detail
