#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "scbec/errors.hpp"
#include "scbec/scenario.hpp"

using namespace scbec;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::istringstream in(slurp(p));
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path find_file(const RunResult& r, const std::string& kind) {
  for (const auto& f : r.files) {
    if (f.filename().string().rfind(kind + "-", 0) == 0) return f;
  }
  FAIL("no ", kind, " output");
  return {};
}

SimulationConfig default_setup() { return load_config(fixture::preset("paper_default.cfg")); }

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("scenario assembly") {
    const Scenario s = build_scenario(default_setup());
    CHECK(s.base.segments.size() == 3);
    CHECK(s.base.bias.z == doctest::Approx(1.317e-5).epsilon(5e-4));
    CHECK(s.bare.converged);
    // Loop sits the configured separation below the bare trap, centred under it in x.
    CHECK(s.flux.loop.center().z == doctest::Approx(s.bare.minimum.z - 1e-5).epsilon(1e-12));
    CHECK(s.flux.loop.center().x == s.bare.minimum.x);
    CHECK(s.flux.loop.center().y == 0.0);
    CHECK(s.flux.loop.current() == 0.0);
    CHECK(s.condensate.atoms == 10000);
    const Vec3 est = estimate_trap_position(default_setup());
    CHECK(est.z == doctest::Approx(5e-4).epsilon(1e-3));
    CHECK(std::abs(s.bare.minimum.z - est.z) / est.z < 0.03);
  }

  TEST_CASE("mode pair from the configuration") {
    SimulationConfig c = default_setup();
    const ModePair fixed = build_modes(build_scenario(c));
    CHECK(fixed.separation() == doctest::Approx(1e-5).epsilon(1e-15));
    CHECK(fixed.first.sigma0 == 5e-7);
    CHECK(fixed.first.t == 0.1);
    c.interferometry.separation.reset();
    c.interferometry.sigma0.reset();
    const Scenario s = build_scenario(c);
    const ModePair derived = build_modes(s);
    CHECK(derived.separation() > 0.0);
    CHECK(derived.first.sigma0 > 0.0);
  }

  TEST_CASE("run ids are deterministic and input sensitive") {
    const SimulationConfig c = default_setup();
    CHECK(make_run_id(c, "trap") == make_run_id(c, "trap"));
    CHECK(make_run_id(c, "trap").size() == 16);
    CHECK(make_run_id(c, "trap") != make_run_id(c, "flux"));
    SimulationConfig d = c;
    d.interferometry.seed = 2;
    CHECK(make_run_id(c, "trap") != make_run_id(d, "trap"));
  }

  TEST_CASE("field profile output") {
    const fs::path dir = fixture::scratch_dir("profile");
    const RunResult r = run_subcommand("field-profile", default_setup(), dir);
    const auto rows = lines(find_file(r, "profile"));
    REQUIRE(rows.size() == 602);
    CHECK(rows[0] == "x_m,B_unperturbed_T,B_branch0_T,B_branch1_T");
    const Scenario s = build_scenario(default_setup());
    const double first = std::stod(rows[1].substr(0, rows[1].find(',')));
    const double last = std::stod(rows[601].substr(0, rows[601].find(',')));
    CHECK(first == doctest::Approx(s.bare.minimum.x - 3e-5).epsilon(1e-9));
    CHECK(last == doctest::Approx(s.bare.minimum.x + 3e-5).epsilon(1e-9));
    CHECK(find_file(r, "metadata").filename() == "metadata-" + r.run_id + ".json");
    for (const auto& f : r.files) CHECK(f.filename().string().find(r.run_id) != std::string::npos);

    const auto meta = nlohmann::json::parse(slurp(find_file(r, "metadata")));
    CHECK(meta["run_id"] == r.run_id);
    CHECK(meta["subcommand"] == "field-profile");
    CHECK(meta["config"]["wire.current_a"] == "5");
    CHECK(meta.contains("constants"));
    CHECK(meta["outputs"].size() == 1);
    const double amp = meta["results"]["perturbation_amplitude_t"][0];
    CHECK(amp > 5.5e-7 / 2.0);
    CHECK(amp < 5.5e-7 * 2.0);
    fs::remove_all(dir);
  }

  TEST_CASE("outputs are never overwritten") {
    const fs::path dir = fixture::scratch_dir("once");
    run_subcommand("trap", default_setup(), dir);
    CHECK_THROWS_AS(run_subcommand("trap", default_setup(), dir), ArgumentError);
    // A different input gives a fresh id and succeeds.
    SimulationConfig other = default_setup();
    other.atoms = 20000;
    CHECK_NOTHROW(run_subcommand("trap", other, dir));
    fs::remove_all(dir);
  }

  TEST_CASE("flux output carries the loop field check") {
    const fs::path dir = fixture::scratch_dir("flux");
    const RunResult r = run_subcommand("flux", default_setup(), dir);
    const std::string csv = slurp(find_file(r, "flux"));
    for (const char* q : {"Phi_ext_over_Phi0", "I_branch0", "I_branch1", "B_loop_max", "loop_radius", "z_bias"}) {
      CHECK(csv.find(q) != std::string::npos);
    }
    const auto meta = nlohmann::json::parse(slurp(find_file(r, "metadata")));
    CHECK(meta["results"]["critical_field"]["pass"] == true);
    const double f = meta["results"]["external_flux_over_flux_quantum"];
    CHECK(f == doctest::Approx(0.5).epsilon(0.05));

    // Rounded bias: flux scales with the bias below half a quantum.
    const RunResult n = run_subcommand("flux", load_config(fixture::preset("nominal_zbias.cfg")), dir);
    const auto nmeta = nlohmann::json::parse(slurp(find_file(n, "metadata")));
    const double fn = nmeta["results"]["external_flux_over_flux_quantum"];
    CHECK(fn / f == doctest::Approx(1e-5 / default_setup().zbias()).epsilon(0.05));
    fs::remove_all(dir);
  }

  TEST_CASE("montecarlo is reproducible across runs") {
    SimulationConfig c = default_setup();
    RunOptions o;
    o.shots = 2000;
    o.seed = 7;
    const fs::path a = fixture::scratch_dir("mc-a"), b = fixture::scratch_dir("mc-b");
    const RunResult ra = run_subcommand("montecarlo", c, a, o);
    const RunResult rb = run_subcommand("montecarlo", c, b, o);
    CHECK(ra.run_id == rb.run_id);
    for (const char* kind : {"shots", "histogram", "periodogram"}) {
      CHECK(slurp(find_file(ra, kind)) == slurp(find_file(rb, kind)));
    }
    const auto meta = nlohmann::json::parse(slurp(find_file(ra, "metadata")));
    CHECK(meta["seed"] == 7);
    CHECK(meta["config"]["interferometry.shots"] == "2000");
    CHECK(lines(find_file(ra, "shots")).size() == 2001);
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("protocol failure propagates with the step") {
    const fs::path dir = fixture::scratch_dir("broken");
    try {
      run_subcommand("entangle", load_config(fixture::data("broken_no_trap.cfg")), dir);
      FAIL("expected ProtocolError");
    } catch (const ProtocolError& e) {
      CHECK(e.step() == 484);
    }
    fs::remove_all(dir);
  }

  TEST_CASE("argument checks") {
    const fs::path dir = fixture::scratch_dir("args");
    CHECK_THROWS_AS(run_subcommand("plot", default_setup(), dir), ArgumentError);
    RunOptions o;
    o.shots = 0;
    CHECK_THROWS_AS(run_subcommand("montecarlo", default_setup(), dir, o), ArgumentError);
    CHECK(subcommand_names().size() == 6);
    fs::remove_all(dir);
  }

  TEST_CASE("small condensates warn") {
    const fs::path dir = fixture::scratch_dir("small");
    SimulationConfig c = default_setup();
    c.atoms = 50;
    const RunResult r = run_subcommand("trap", c, dir);
    bool warned = false;
    for (const auto& w : r.warnings) warned |= w.find("N < 100") != std::string::npos;
    CHECK(warned);
    fs::remove_all(dir);
  }
}
