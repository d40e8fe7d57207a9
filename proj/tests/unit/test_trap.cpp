#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "scbec/constants.hpp"
#include "scbec/errors.hpp"
#include "scbec/trap.hpp"

using namespace scbec;

namespace {

const AtomSpecies kRb = AtomSpecies::rb87();

ChipGeometry single_bar(Vec3 bias) {
  ChipGeometry g;
  g.segments.emplace_back(Vec3{-2.5e-3, 0, 0}, Vec3{2.5e-3, 0, 0}, 5.0);
  g.bias = bias;
  return g;
}

double hz(double w) { return w / (2.0 * constants::pi); }

}  // namespace

TEST_SUITE("trap") {
  TEST_CASE("Zeeman potential") {
    CHECK(zeeman_potential({0, 0, 0}, kRb) == 0.0);
    CHECK(zeeman_potential({0, 1e-7, 0}, kRb) == doctest::Approx(9.274e-31).epsilon(1e-4));
    const double direct = static_cast<double>(oracle::kBohr) * 2e-3;  // mF gF = 1
    CHECK(zeeman_potential({0, 2e-3, 0}, kRb) == doctest::Approx(direct).epsilon(1e-15));
    CHECK(zeeman_potential({0, 2e-3, 0}, kRb) == doctest::Approx(1.8548e-26).epsilon(1e-4));
    // Exactly linear in |B|.
    const Vec3 b{3e-5, -4e-5, 1.2e-4};
    CHECK(zeeman_potential(b * 2.0, kRb) == 2.0 * zeeman_potential(b, kRb));
    CHECK(zeeman_potential(b * 0.25, kRb) == 0.25 * zeeman_potential(b, kRb));
  }

  TEST_CASE("atom validation") {
    AtomSpecies a = kRb;
    a.m_f = -2;
    CHECK_THROWS_AS(a.validate(), ArgumentError);
    a = kRb;
    a.mass = 0.0;
    CHECK_THROWS_AS(a.validate(), ArgumentError);
    CHECK_THROWS_AS(find_minimum(fixture::z_trap(), a, {0, 0, 5e-4}), ArgumentError);
  }

  TEST_CASE("single bar: minimum height matches the cancellation height") {
    const TrapCharacterization c = find_minimum(single_bar({0, 2e-3, 0}), kRb, {0, 0, 5e-4});
    CHECK(c.converged);
    const double h = constants::mu0 * 5.0 / (2.0 * constants::pi * 2e-3);
    CHECK(h == doctest::Approx(5.0e-4).epsilon(1e-3));
    CHECK(c.minimum.z == doctest::Approx(h).epsilon(0.025));
    CHECK(c.field_at_minimum < 1e-12);
    // A zero trap bottom is not a trap.
    CHECK_THROWS_AS(trap_frequencies(single_bar({0, 2e-3, 0}), kRb, c), NotATrapError);
  }

  TEST_CASE("single bar: an x bias leaves the transverse minimum in place") {
    const TrapCharacterization with = find_minimum(single_bar({1e-4, 2e-3, 0}), kRb, {0, 0, 5e-4});
    // The valley is flat along x; compare in the (y, z) plane at the found x.
    const ChipGeometry bare = single_bar({0, 2e-3, 0});
    const auto oracle_min = oracle::grid_minimum(
        [&](double y, double z) { return norm(total_field(bare, {with.minimum.x, y, z})); }, 0.0, 5e-4, 5e-5,
        5e-5);
    CHECK(std::abs(with.minimum.y - oracle_min[0]) < 1e-7);
    CHECK(std::abs(with.minimum.z - oracle_min[1]) < 1e-7);
    CHECK(with.field_at_minimum == doctest::Approx(1e-4).epsilon(1e-9));
  }

  TEST_CASE("Z trap: minimum on the mirror plane x = 0") {
    const TrapCharacterization c = find_minimum(fixture::z_trap(), kRb, {2e-5, 1e-5, 4.5e-4});
    CHECK(std::abs(c.minimum.x) < 1e-8);
    CHECK(std::abs(c.minimum.y) < 1e-8);
  }

  TEST_CASE("Z trap: minimum independent of the initial guess within the basin") {
    const ChipGeometry g = fixture::z_trap();
    const Vec3 ref = find_minimum(g, kRb, {0, 0, 5e-4}).minimum;
    for (const Vec3& guess : {Vec3{0, 0, 4.5e-4}, Vec3{0, 0, 5.5e-4}, Vec3{5e-5, 0, 5e-4}, Vec3{-5e-5, 2e-5, 4.6e-4},
                              Vec3{3e-5, -3e-5, 5.3e-4}}) {
      CHECK(norm(find_minimum(g, kRb, guess).minimum - ref) < 1e-9);
    }
  }

  TEST_CASE("Z trap: regression values and shape") {
    const TrapCharacterization c = characterize_trap(fixture::z_trap(), kRb, {0, 0, 5e-4});
    CHECK(c.minimum.z == doctest::Approx(4.899384092809e-4).epsilon(1e-9));
    CHECK(c.field_at_minimum == doctest::Approx(1.466461766255e-4).epsilon(1e-9));
    CHECK(hz(c.frequencies[0]) == doctest::Approx(9.7756847371).epsilon(1e-6));
    CHECK(hz(c.frequencies[1]) == doctest::Approx(438.51270067).epsilon(1e-6));
    CHECK(hz(c.frequencies[2]) == doctest::Approx(447.27323504).epsilon(1e-6));
    CHECK(c.frequencies[0] < c.frequencies[1]);
    CHECK(c.frequencies[1] < c.frequencies[2]);
    CHECK(c.frequencies[1] / c.frequencies[0] > 5.0);
    // The soft axis is the bar direction.
    CHECK(std::abs(c.principal_axes.col(0).x()) > 0.99);
    const Eigen::Matrix3d P = c.principal_axes;
    CHECK((P.transpose() * P - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("trap frequencies scale by sqrt(2) when every source doubles") {
    const ChipGeometry g = fixture::z_trap();
    const TrapCharacterization a = characterize_trap(g, kRb, {0, 0, 5e-4});
    const TrapCharacterization b = characterize_trap(g.scaled(2.0), kRb, {0, 0, 5e-4});
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(b.frequencies[i] / a.frequencies[i] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
    }
  }

  TEST_CASE("Ioffe-Pritchard radial curvature") {
    // Long wire plus transverse bias is a 2-D quadrupole with gradient
    // b' = B_y / h; an axial bias B0 gives radial curvature b'^2 / B0.
    ChipGeometry g;
    g.segments.emplace_back(Vec3{-0.5, 0, 0}, Vec3{0.5, 0, 0}, 5.0);
    const double b0 = 1e-4, by = 2e-3;
    g.bias = {b0, by, 0.0};
    const TrapCharacterization c = find_minimum(g, kRb, {0, 0, 5e-4});
    const double h = constants::mu0 * 5.0 / (2.0 * constants::pi * by);
    const double gradient = by / h;
    const Eigen::Matrix3d curvature = kRb.magnetic_moment() * field_magnitude_derivatives(g, c.minimum).hessian;
    const Eigen::Vector3d lambda = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(curvature).eigenvalues();
    const double analytic = static_cast<double>(oracle::kBohr) * gradient * gradient / b0;
    CHECK(lambda(1) == doctest::Approx(analytic).epsilon(0.01));
    CHECK(lambda(2) == doctest::Approx(analytic).epsilon(0.01));
  }

  TEST_CASE("exact Hessian agrees with central differences") {
    const ChipGeometry g = fixture::z_trap({1e-4, 2e-3, 1.3e-5});
    const TrapCharacterization c = find_minimum(g, kRb, {0, 0, 5e-4});
    const Eigen::Matrix3d exact = field_magnitude_derivatives(g, c.minimum).hessian;
    const Eigen::Matrix3d fd = magnitude_hessian_fd(g, c.minimum, 1e-7);
    CHECK((exact - fd).norm() < 1e-4 * exact.norm());
    CHECK_THROWS_AS(magnitude_hessian_fd(g, c.minimum, 0.0), ArgumentError);
  }

  TEST_CASE("trap_frequencies needs a converged minimum") {
    TrapCharacterization c;
    c.minimum = {0, 0, 4.9e-4};
    CHECK_THROWS_AS(trap_frequencies(fixture::z_trap(), kRb, c), ArgumentError);
  }

  TEST_CASE("a saddle is not a trap") {
    // Far above the wire the bias dominates and |B| has no minimum.
    TrapCharacterization c;
    c.minimum = {0, 0, 2e-3};
    c.converged = true;
    CHECK_THROWS_AS(trap_frequencies(fixture::z_trap(), kRb, c), NotATrapError);
  }

  TEST_CASE("axial profile") {
    const ChipGeometry base = fixture::z_trap();
    const TrapCharacterization c = find_minimum(base, kRb, {0, 0, 5e-4});
    AxialLine line;
    line.origin = c.minimum;
    const CurrentLoop loop({0, 0, c.minimum.z - 1e-5}, 5e-6, {0, 0, 1}, 0.0);

    SUBCASE("zero loop current leaves all curves identical") {
      const AxialProfile p = axial_profile(base, {loop, loop}, line, 101);
      CHECK(p.positions.size() == 101);
      CHECK(p.branch0 == p.unperturbed);
      CHECK(p.branch1 == p.unperturbed);
      for (std::size_t i = 1; i < p.positions.size(); ++i) CHECK(p.positions[i] > p.positions[i - 1]);
      CHECK(p.positions.front() == doctest::Approx(-3e-5));
      CHECK(p.positions.back() == doctest::Approx(3e-5));
    }
    SUBCASE("swapping the current sign swaps the branches exactly") {
      const CurrentLoop plus = loop.with_current(7e-5), minus = loop.with_current(-7e-5);
      const AxialProfile a = axial_profile(base, {plus, minus}, line, 61);
      const AxialProfile b = axial_profile(base, {minus, plus}, line, 61);
      CHECK(a.branch0 == b.branch1);
      CHECK(a.branch1 == b.branch0);
      // Loop field itself is exactly odd in the current.
      for (double s : a.positions) {
        const Vec3 p = line.origin + Vec3{s, 0, 0};
        CHECK(loop_field(plus, p) == -loop_field(minus, p));
      }
    }
    SUBCASE("argument and singular-sample errors") {
      CHECK_THROWS_AS(axial_profile(base, {loop, loop}, line, 1), ArgumentError);
      AxialLine through;
      through.origin = {0, 0, 0};
      through.direction = {0, 0, 1};
      through.half_span = 1e-3;
      try {
        axial_profile(base, {loop, loop}, through, 5);
        FAIL("expected a singular point");
      } catch (const SingularPointError& e) {
        CHECK(std::string(e.what()).find("sample 2") != std::string::npos);
      }
    }
  }
}
