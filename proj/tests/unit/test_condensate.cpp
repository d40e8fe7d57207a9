#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "scbec/condensate.hpp"
#include "scbec/constants.hpp"
#include "scbec/errors.hpp"
#include "scbec/scenario.hpp"

using namespace scbec;

namespace {

const AtomSpecies kRb = AtomSpecies::rb87();
constexpr double kTwoPi = 2.0 * constants::pi;

}  // namespace

TEST_SUITE("condensate") {
  TEST_CASE("Thomas-Fermi scaling with atom number") {
    const std::array<double, 3> w{kTwoPi * 9.8, kTwoPi * 438.0, kTwoPi * 447.0};
    const double mu1 = thomas_fermi_mu({kRb, 1}, w);
    for (long n : {2L, 10L, 137L, 10000L, 1000000L}) {
      CHECK(thomas_fermi_mu({kRb, n}, w) / mu1 == doctest::Approx(std::pow(static_cast<double>(n), 0.4)).epsilon(1e-13));
    }
  }

  TEST_CASE("log-log slope of mu(N) is 2/5") {
    const std::array<double, 3> w{kTwoPi * 20.0, kTwoPi * 300.0, kTwoPi * 310.0};
    const double ns[] = {1e2, 1e3, 1e4, 1e5};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double n : ns) {
      const double x = std::log(n), y = std::log(thomas_fermi_mu({kRb, static_cast<long>(n)}, w));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (4.0 * sxy - sx * sy) / (4.0 * sxx - sx * sx);
    CHECK(std::abs(slope - 0.4) < 1e-12);
  }

  TEST_CASE("dual implementation at 100 Hz isotropic") {
    const double w = kTwoPi * 100.0;
    const double mu = thomas_fermi_mu({kRb, 10000}, {w, w, w});
    const double ref = oracle::thomas_fermi_mu(10000, oracle::kRbMass, oracle::kRbScattering, 2.0L * oracle::kPi * 100.0L);
    CHECK(mu == doctest::Approx(ref).epsilon(1e-12));
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(thomas_fermi_mu({kRb, 100}, {1.0, 0.0, 1.0}), ArgumentError);
    CHECK_THROWS_AS(thomas_fermi_mu({kRb, 0}, {1.0, 1.0, 1.0}), ArgumentError);
    CHECK_THROWS_AS(ground_width({1.0, -1.0, 1.0}, kRb), ArgumentError);
  }

  TEST_CASE("ground-state widths") {
    const double w = kTwoPi * 100.0;
    const auto s = ground_width({w, 4.0 * w, 9.0 * w}, kRb);
    const double ref = std::sqrt(static_cast<double>(oracle::kHbar / (oracle::kRbMass * 2.0L * oracle::kPi * 100.0L)));
    CHECK(s[0] == doctest::Approx(1.078e-6).epsilon(5e-4));
    CHECK(s[0] == doctest::Approx(ref).epsilon(1e-14));
    CHECK(s[1] == s[0] / 2.0);
    CHECK(s[2] == doctest::Approx(s[0] / 3.0).epsilon(1e-15));
  }

  TEST_CASE("trap energy bookkeeping") {
    const TrapCharacterization t = characterize_trap(fixture::z_trap(), kRb, {0, 0, 5e-4});
    const CondensateSpec spec{kRb, 10000};
    const TrapEnergy e = trap_energy(spec, t);
    CHECK(e.mu_field * kRb.magnetic_moment() - e.mu == 0.0);
    CHECK(e.interaction == thomas_fermi_mu(spec, t.frequencies));
    CHECK(e.mu == doctest::Approx(kRb.magnetic_moment() * t.field_at_minimum + e.interaction).epsilon(1e-15));
  }

  TEST_CASE("zero loop current gives equal branch energies") {
    const ChipGeometry base = fixture::z_trap({1e-4, 2e-3, 1.3e-5});
    const TrapCharacterization bare = find_minimum(base, kRb, {0, 0, 5e-4});
    const CurrentLoop loop({bare.minimum.x, 0, bare.minimum.z - 1e-5}, 5e-6, {0, 0, 1}, 0.0);
    const FluxLoopState fls{loop, 5e-7, self_inductance(5e-6, 5e-7), 0.0, 0, 1, 0.0, 0.0};
    const BranchEnergetics e = branch_energetics(base, fls, {kRb, 10000}, bare.minimum, bare.minimum);
    CHECK(e.mu0 == e.mu1);
    CHECK(e.delta_mu == 0.0);
  }

  TEST_CASE("mirror-symmetric geometry gives equal branch energies") {
    const Scenario s = build_scenario(load_config(fixture::preset("symmetric.cfg")));
    CHECK(s.flux.current_branch0 == doctest::Approx(-s.flux.current_branch1).epsilon(1e-6));
    const BranchEnergetics e = branch_energetics(s.base, s.flux, s.condensate, s.bare.minimum);
    CHECK(std::abs(e.mu0 - e.mu1) < 1e-6 * e.mu0);
    CHECK(std::abs(e.delta_mu) < 1e-6 * e.mu0);
    // The branch minima are mirror images.
    CHECK(e.trap0.minimum.x == doctest::Approx(-e.trap1.minimum.x).epsilon(1e-6));
  }

  TEST_CASE("default geometry: branch energetics") {
    const Scenario s = build_scenario(load_config(fixture::preset("paper_default.cfg")));
    const BranchEnergetics e = branch_energetics(s.base, s.flux, s.condensate, s.bare.minimum);
    CHECK(e.mu0 != e.mu1);
    const double separation = norm(e.trap1.minimum - e.trap0.minimum);
    CHECK(separation > 0.3 * 1e-5);
    CHECK(separation < 3.0 * 1e-5);
    CHECK(e.warnings.empty());

    SUBCASE("energetics are trap_frequencies composed with the TF formula") {
      const TrapCharacterization t0 = trap_frequencies(s.base.with_loop(s.flux.branch_loops().first), kRb, e.trap0);
      const TrapEnergy again = trap_energy(s.condensate, t0);
      CHECK(again.mu == e.mu0);
      CHECK(again.mu_field == e.mu0_field);
      CHECK(e.mu0_field * kRb.magnetic_moment() - e.mu0 == 0.0);
      CHECK(e.mu1_field * kRb.magnetic_moment() - e.mu1 == 0.0);
      CHECK(e.delta_mu == doctest::Approx(e.mu0 - e.mu1).epsilon(1e-6));
    }
    SUBCASE("field-unit coefficient within a factor 2 of 2.631e-9 T at 1 G") {
      const TrapEnergy bare = trap_energy(s.condensate, s.bare);
      const double c = bare.interaction / kRb.magnetic_moment() / std::pow(1e4, 0.4);
      CHECK(c > 2.631e-9 / 2.0);
      CHECK(c < 2.631e-9 * 2.0);
    }
  }

  TEST_CASE("small condensates are flagged") {
    const Scenario s = build_scenario(load_config(fixture::preset("paper_default.cfg")));
    CondensateSpec small = s.condensate;
    small.atoms = 50;
    const BranchEnergetics e = branch_energetics(s.base, s.flux, small, s.bare.minimum);
    REQUIRE(e.warnings.size() == 1);
    CHECK(e.warnings[0].find("N < 100") != std::string::npos);
  }
}
