#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "scbec/errors.hpp"
#include "scbec/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

const char* describe(const std::string& name) {
  if (name == "field-profile") return "|B| along x through the trap for the bare and both loop branches";
  if (name == "trap") return "trap minimum, frequencies and chemical potential per branch";
  if (name == "flux") return "loop currents, flux bias and critical-field check";
  if (name == "entangle") return "ramp the trap onto the loop and accumulate the relative phase";
  if (name == "interfere") return "time-of-flight density of the N-atom cat state";
  if (name == "montecarlo") return "sampled shots, histogram and fringe-period estimate";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superconducting-loop / condensate entanglement simulator"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  for (const auto& name : scbec::subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name, describe(name));
    sub->add_option("--config", config, "configuration file")->required();
    sub->add_option("--out", out, "output directory")->required();
    sub->add_option("--seed", seed, "random seed override");
    sub->add_option("--shots", shots, "shot count override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  scbec::RunOptions options;
  if (sub->count("--seed") > 0) options.seed = seed;
  if (sub->count("--shots") > 0) options.shots = shots;

  try {
    const scbec::SimulationConfig cfg = scbec::load_config(config);
    const scbec::RunResult r = scbec::run_subcommand(sub->get_name(), cfg, out, options);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : r.files) std::cout << f.string() << '\n';
  } catch (const scbec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
