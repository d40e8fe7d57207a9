#include <doctest.h>

#include <cmath>
#include <string>

#include "fixtures.hpp"
#include "scbec/config.hpp"
#include "scbec/errors.hpp"

using namespace scbec;

namespace {

const std::string kMinimal =
    "wire.bar_length_m = 5e-3\n"
    "wire.lead_length_m = 2e-3\n"
    "wire.current_a = 5\n"
    "bias.y_t = 2e-3\n"
    "loop.radius_m = 5e-6\n"
    "loop.separation_m = 1e-5\n"
    "condensate.atoms = 10000\n";

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "test.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("presets load") {
    const SimulationConfig p = load_config(fixture::preset("paper_default.cfg"));
    CHECK(p.wire.bar_length == 5e-3);
    CHECK(p.wire.current == 5.0);
    CHECK(p.bias.y == 2e-3);
    CHECK(p.bias.x == 1e-4);
    CHECK(p.loop.radius == 5e-6);
    CHECK(p.loop.zbias_mode == ZBiasMode::half_flux_quantum);
    CHECK(p.zbias() == doctest::Approx(1.317e-5).epsilon(5e-4));
    CHECK(p.loop.n0 == 0);
    CHECK(p.loop.n1 == 1);
    CHECK(p.loop.critical_field == 1e-2);
    CHECK(p.atoms == 10000);
    CHECK(p.ramp.steps == 512);
    CHECK(p.ramp.shape == RampShape::smoothstep);
    CHECK(p.interferometry.shots == 20000);
    CHECK(p.profile.samples == 601);

    const SimulationConfig s = load_config(fixture::preset("symmetric.cfg"));
    CHECK(s.zbias() == 0.0);
    CHECK(s.loop.x.value() == 0.0);
    CHECK(s.loop.n0 == -s.loop.n1);

    const SimulationConfig n = load_config(fixture::preset("nominal_zbias.cfg"));
    CHECK(n.loop.zbias_mode == ZBiasMode::explicit_value);
    CHECK(n.zbias() == 1e-5);
    // Differs from the default preset in the normal bias only.
    auto en = n.echo(), ep = p.echo();
    REQUIRE(en.size() == ep.size());
    for (std::size_t i = 0; i < en.size(); ++i) {
      if (en[i].first != "loop.zbias_t") CHECK(en[i].second == ep[i].second);
    }
  }

  TEST_CASE("defaults fill optional keys") {
    const SimulationConfig c = parse_config(kMinimal);
    CHECK(c.bias.x == 1e-4);
    CHECK(c.loop.wire_radius == 5e-7);
    CHECK_FALSE(c.loop.x.has_value());
    CHECK_FALSE(c.interferometry.separation.has_value());
    CHECK(c.atom.label == AtomSpecies::rb87().label);
  }

  TEST_CASE("comments, blank lines and signs") {
    const SimulationConfig c = parse_config(kMinimal + "\n# note\n  bias.x_t = -2e-4   # reversed\n");
    CHECK(c.bias.x == -2e-4);
    const SimulationConfig neg = parse_config(
        "wire.bar_length_m = 5e-3\nwire.lead_length_m = 2e-3\nwire.current_a = -5\nbias.y_t = -2e-3\n"
        "loop.radius_m = 5e-6\nloop.separation_m = 1e-5\ncondensate.atoms = 10000\n");
    CHECK(neg.wire.current == -5.0);
    CHECK(neg.bias.y == -2e-3);
  }

  TEST_CASE("errors name the line and key") {
    CHECK(contains(error_of(kMinimal + "wire.colour = red\n"), "test.cfg:8: wire.colour: unknown key"));
    CHECK(contains(error_of(kMinimal + "bias.y_t = 1e-3\n"), "test.cfg:8: bias.y_t: key given twice"));
    CHECK(contains(error_of(kMinimal + "bias.x_t = abc\n"), "'abc' is not a number"));
    CHECK(contains(error_of(kMinimal + "bias.x_t = inf\n"), "finite"));
    CHECK(contains(error_of(kMinimal + "bias.x_t = nan\n"), "finite"));
    CHECK(contains(error_of(kMinimal + "bias.x_t\n"), "test.cfg:8: expected 'section.key = value'"));
    CHECK(contains(error_of(kMinimal + "bias.x_t =\n"), "missing value"));
    CHECK(contains(error_of(kMinimal + "loop.wire_radius_m = -1\n"), "positive"));
    CHECK(contains(error_of(kMinimal + "atom.species = cs133\n"), "unknown species"));
    CHECK(contains(error_of(kMinimal + "ramp.steps = 1.5\n"), "not an integer"));
    CHECK(contains(error_of(kMinimal + "interferometry.atoms = 9\n"), "at most 8"));
    CHECK(contains(error_of(kMinimal + "loop.n1 = 0\n"), "must differ"));
    CHECK(contains(error_of(kMinimal + "loop.wire_radius_m = 3e-6\n"), "wire_radius"));
    CHECK(contains(error_of(kMinimal + "interferometry.atom_loss = yes\n"), "true or false"));
    CHECK(contains(error_of(kMinimal + "interferometry.efficiency = 0\n"), "interferometry.efficiency"));
    const std::string missing = kMinimal.substr(0, kMinimal.find("condensate"));
    CHECK(contains(error_of(missing), "missing mandatory key condensate.atoms"));
    CHECK_THROWS_AS(load_config(fixture::data("does_not_exist.cfg")), ConfigError);
  }

  TEST_CASE("optional tokens") {
    const SimulationConfig c = parse_config(kMinimal +
                                            "loop.x_m = from-trap\nloop.zbias_t = 2.5e-5\n"
                                            "interferometry.separation_m = from-trap\ninterferometry.sigma0_m = 4e-7\n");
    CHECK_FALSE(c.loop.x.has_value());
    CHECK(c.loop.zbias_mode == ZBiasMode::explicit_value);
    CHECK(c.zbias() == 2.5e-5);
    CHECK_FALSE(c.interferometry.separation.has_value());
    CHECK(c.interferometry.sigma0.value() == 4e-7);
  }

  TEST_CASE("echo round-trips through the parser") {
    for (const char* name : {"paper_default.cfg", "symmetric.cfg"}) {
      const SimulationConfig a = load_config(fixture::preset(name));
      std::string text;
      // atom.label is derived from the other atom keys.
      for (const auto& [k, v] : a.echo()) {
        if (k != "atom.label") text += k + " = " + v + "\n";
      }
      const SimulationConfig b = parse_config(text);
      auto ea = a.echo(), eb = b.echo();
      REQUIRE(ea.size() == eb.size());
      for (std::size_t i = 0; i < ea.size(); ++i) {
        CHECK(ea[i].first == eb[i].first);
        if (ea[i].first != "atom.label") CHECK(ea[i].second == eb[i].second);
      }
    }
  }
}
