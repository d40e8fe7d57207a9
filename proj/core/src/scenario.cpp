#include "scbec/scenario.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scbec/constants.hpp"
#include "scbec/errors.hpp"

#ifndef SCBEC_VERSION
#define SCBEC_VERSION "unknown"
#endif

namespace scbec {

namespace {

using nlohmann::ordered_json;

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string utc_now() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                   std::chrono::system_clock::now())));
}

double hz(double omega) { return omega / (2.0 * constants::pi); }

class RunWriter {
 public:
  RunWriter(std::filesystem::path dir, std::string id) : dir_(std::move(dir)), id_(std::move(id)) {
    std::filesystem::create_directories(dir_);
  }

  std::filesystem::path write(const std::string& kind, const std::string& ext, const std::string& body) {
    const std::filesystem::path p = dir_ / fmt::format("{}-{}.{}", kind, id_, ext);
    if (std::filesystem::exists(p)) {
      throw ArgumentError(fmt::format("refusing to overwrite existing output {}", p.string()));
    }
    std::ofstream f(p, std::ios::binary);
    f << body;
    if (!f) throw Error(fmt::format("failed writing {}", p.string()));
    files_.push_back(p);
    return p;
  }

  const std::vector<std::filesystem::path>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::string id_;
  std::vector<std::filesystem::path> files_;
};

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

ordered_json trap_json(const TrapCharacterization& t) {
  return {{"minimum_m", vec_json(t.minimum)},
          {"field_at_minimum_t", t.field_at_minimum},
          {"frequencies_hz", {hz(t.frequencies[0]), hz(t.frequencies[1]), hz(t.frequencies[2])}}};
}

struct Outcome {
  ordered_json results = ordered_json::object();
  std::vector<std::string> warnings;
};

void critical_field_warning(const Scenario& s, Outcome& o) {
  const CriticalFieldReport r = critical_field_check(s.base, s.flux.loop, s.config.loop.critical_field);
  o.results["critical_field"] = {{"max_field_t", r.max_field}, {"critical_field_t", r.critical_field},
                                 {"samples", r.samples}, {"pass", r.pass}};
  if (!r.pass) {
    o.warnings.push_back(fmt::format("field at the loop {:.3e} T reaches the critical field {:.3e} T",
                                     r.max_field, r.critical_field));
  }
}

void trap_axis_note(const Scenario& s, Outcome& o) {
  const Vec3 d = s.bare.minimum - s.flux.loop.center();
  o.results["trap_offset_from_loop_axis_m"] = std::hypot(d.x, d.y);
}

Outcome run_field_profile(const Scenario& s, RunWriter& w) {
  Outcome o;
  AxialLine line;
  line.origin = s.bare.minimum;
  line.half_span = s.config.profile.half_span;
  const AxialProfile p = axial_profile(s.base, s.flux.branch_loops(), line, s.config.profile.samples);
  std::string csv = "x_m,B_unperturbed_T,B_branch0_T,B_branch1_T\n";
  double amp0 = 0.0, amp1 = 0.0, asym = 0.0;
  for (std::size_t i = 0; i < p.positions.size(); ++i) {
    csv += fmt::format("{},{},{},{}\n", num(p.positions[i] + line.origin.x), num(p.unperturbed[i]),
                       num(p.branch0[i]), num(p.branch1[i]));
    const double d0 = p.branch0[i] - p.unperturbed[i];
    const double d1 = p.branch1[i] - p.unperturbed[i];
    amp0 = std::max(amp0, std::abs(d0));
    amp1 = std::max(amp1, std::abs(d1));
    asym = std::max(asym, std::abs(d0 + d1));
  }
  w.write("profile", "csv", csv);
  o.results["perturbation_amplitude_t"] = {amp0, amp1};
  o.results["max_branch_asymmetry_t"] = asym;
  o.results["unperturbed_trap"] = trap_json(s.bare);
  trap_axis_note(s, o);
  return o;
}

Outcome run_trap(const Scenario& s, RunWriter& w) {
  Outcome o;
  const auto [g0, g1] = branch_seeds(s.base, s.flux, s.bare.minimum);
  const BranchEnergetics e = branch_energetics(s.base, s.flux, s.condensate, g0, g1);
  const TrapEnergy bare = trap_energy(s.condensate, s.bare);
  std::string csv = "label,x_m,y_m,z_m,b_min_t,f1_hz,f2_hz,f3_hz,mu_j,mu_field_t\n";
  const auto row = [&](const char* label, const TrapCharacterization& t, double mu, double mu_field) {
    csv += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", label, num(t.minimum.x), num(t.minimum.y),
                       num(t.minimum.z), num(t.field_at_minimum), num(hz(t.frequencies[0])),
                       num(hz(t.frequencies[1])), num(hz(t.frequencies[2])), num(mu), num(mu_field));
  };
  row("unperturbed", s.bare, bare.mu, bare.mu_field);
  row("branch0", e.trap0, e.mu0, e.mu0_field);
  row("branch1", e.trap1, e.mu1, e.mu1_field);
  w.write("trap", "csv", csv);
  const double coefficient =
      bare.interaction / s.condensate.atom.magnetic_moment() / std::pow(static_cast<double>(s.condensate.atoms), 0.4);
  o.results["unperturbed_trap"] = trap_json(s.bare);
  o.results["branch0_trap"] = trap_json(e.trap0);
  o.results["branch1_trap"] = trap_json(e.trap1);
  o.results["mu_field_coefficient_t"] = coefficient;
  o.results["branch_minimum_separation_m"] = norm(e.trap1.minimum - e.trap0.minimum);
  o.warnings = e.warnings;
  critical_field_warning(s, o);
  trap_axis_note(s, o);
  return o;
}

Outcome run_flux(const Scenario& s, RunWriter& w) {
  Outcome o;
  const FluxLoopState& f = s.flux;
  const CriticalFieldReport crit = critical_field_check(s.base, f.loop, s.config.loop.critical_field);
  std::string csv = "quantity,value,unit\n";
  const auto row = [&](const char* q, double v, const char* unit) {
    csv += fmt::format("{},{},{}\n", q, num(v), unit);
  };
  row("L", f.self_inductance, "H");
  row("Phi_ext", f.external_flux, "Wb");
  row("Phi_ext_over_Phi0", f.external_flux / constants::flux_quantum, "1");
  row("I_branch0", f.current_branch0, "A");
  row("I_branch1", f.current_branch1, "A");
  row("B_loop_max", crit.max_field, "T");
  row("loop_radius", f.loop.radius(), "m");
  row("wire_radius", f.wire_radius, "m");
  row("center_x", f.loop.center().x, "m");
  row("center_y", f.loop.center().y, "m");
  row("center_z", f.loop.center().z, "m");
  row("z_bias", s.config.zbias(), "T");
  row("branch_n0", f.branch_n0, "1");
  row("branch_n1", f.branch_n1, "1");
  w.write("flux", "csv", csv);
  o.results["external_flux_over_flux_quantum"] = f.external_flux / constants::flux_quantum;
  o.results["currents_a"] = {f.current_branch0, f.current_branch1};
  critical_field_warning(s, o);
  return o;
}

Outcome run_entangle(const Scenario& s, RunWriter& w) {
  Outcome o;
  const EntangledSystemState st = run_protocol(s.base, s.flux, s.condensate, s.config.ramp, s.bare.minimum);
  std::string csv = "t_s,separation_m,mu0_J,mu1_J,Phi_rad,adiabatic_margin\n";
  for (const auto& p : st.trace) {
    csv += fmt::format("{},{},{},{},{},{}\n", num(p.time), num(p.separation), num(p.mu0), num(p.mu1),
                       num(p.phase), num(p.adiabatic_margin));
  }
  w.write("protocol", "csv", csv);
  o.results["phi_final_rad"] = st.phase;
  o.results["adiabatic_margin"] = st.adiabatic_margin;
  o.results["geometric_phases_rad"] = {st.gamma0, st.gamma1};
  o.results["qubit_populations"] = {std::norm(st.qubit.c0), std::norm(st.qubit.c1)};
  o.warnings = st.warnings;
  o.warnings.emplace_back("geometric phases gamma0 and gamma1 are held at zero (modelling choice)");
  critical_field_warning(s, o);
  return o;
}

std::vector<double> uniform_grid(double lo, double hi, double spacing) {
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / spacing)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + spacing * static_cast<double>(i);
  return g;
}

long state_atoms(const InterferometryConfig& c) { return c.atom_loss ? c.atoms - 1 : c.atoms; }

void check_atom_loss(const InterferometryConfig& c) {
  if (c.atom_loss && c.atoms < 2) throw ArgumentError("interferometry.atom_loss needs interferometry.atoms >= 2");
}

Outcome run_interfere(const Scenario& s, RunWriter& w) {
  Outcome o;
  const InterferometryConfig& ic = s.config.interferometry;
  check_atom_loss(ic);
  const ModePair modes = build_modes(s);
  const long n = state_atoms(ic);
  const double lambda = fringe_period(ic.tof, s.config.atom, modes.separation(), modes.first.sigma0);
  const double half = 4.0 * modes.first.density_sigma() + modes.separation();
  const std::vector<double> grid = uniform_grid(-half, half, lambda / (32.0 * static_cast<double>(ic.atoms)));
  const std::vector<double> com = com_distribution(n, ic.phase, modes, grid, ic.atom_loss);
  const std::vector<double> ref = two_condensate_reference(modes, grid, ic.phase);
  std::string csv = "x_m,com_density_per_m,reference_density_per_m\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += fmt::format("{},{},{}\n", num(grid[i]), num(com[i]), num(ref[i]));
  }
  w.write("density", "csv", csv);
  o.results["lambda_m"] = lambda;
  o.results["com_period_m"] = lambda / static_cast<double>(ic.atoms);
  o.results["mode_separation_m"] = modes.separation();
  o.results["sigma0_m"] = modes.first.sigma0;
  o.results["mixed"] = ic.atom_loss;
  return o;
}

Outcome run_montecarlo(const Scenario& s, RunWriter& w) {
  Outcome o;
  const InterferometryConfig& ic = s.config.interferometry;
  check_atom_loss(ic);
  const ModePair modes = build_modes(s);
  ShotRequest req;
  req.atoms = state_atoms(ic);
  req.phi = ic.phase;
  req.shots = ic.shots;
  req.seed = ic.seed;
  req.sigma_phi = ic.phase_noise;
  req.efficiency = ic.efficiency;
  req.mixed = ic.atom_loss;
  InterferenceRecord rec = sample_shots(req, modes);

  std::string shots = "shot_index,phi_shot_rad,detected,com_m";
  for (long i = 1; i <= req.atoms; ++i) shots += fmt::format(",x{}_m", i);
  shots += '\n';
  for (const auto& sh : rec.shots) {
    shots += fmt::format("{},{},{},{}", sh.index, num(sh.phase), sh.detected ? 1 : 0, sh.detected ? num(sh.com) : "");
    for (long i = 0; i < req.atoms; ++i) {
      shots += ',';
      if (sh.detected) shots += num(sh.positions[static_cast<std::size_t>(i)]);
    }
    shots += '\n';
  }
  w.write("shots", "csv", shots);

  // The signature of interest is Lambda / N_prepared, also after a loss.
  rec.period_com = rec.lambda / static_cast<double>(ic.atoms);
  const std::size_t retained = rec.retained_com().size();
  o.results["retained_shots"] = retained;
  o.results["lambda_m"] = rec.lambda;
  o.results["expected_com_period_m"] = rec.period_com;
  if (retained >= 10) {
    const PeriodEstimate est = extract_period(rec);
    std::string hist = "bin_center_m,count\n";
    for (std::size_t i = 0; i < rec.histogram.counts.size(); ++i) {
      hist += fmt::format("{},{}\n", num(rec.histogram.centers[i]), num(rec.histogram.counts[i]));
    }
    w.write("histogram", "csv", hist);
    std::string pg = "spatial_frequency_per_m,power\n";
    for (std::size_t i = 0; i < rec.periodogram.power.size(); ++i) {
      pg += fmt::format("{},{}\n", num(rec.periodogram.frequencies[i]), num(rec.periodogram.power[i]));
    }
    w.write("periodogram", "csv", pg);
    const Contrast c = contrast_at(rec.retained_com(), 1.0 / rec.period_com);
    o.results["fringe"] = est.fringe;
    o.results["period_m"] = est.period;
    o.results["visibility"] = est.visibility;
    o.results["contrast_at_expected_period"] = {
        {"visibility", c.visibility}, {"standard_error", c.standard_error}, {"rayleigh_p", c.rayleigh_p}};
  } else {
    o.warnings.push_back(fmt::format("only {} retained shots; no period extracted", retained));
  }
  const double bound = constants::pi / (2.0 * static_cast<double>(ic.atoms));
  if (ic.phase_noise > bound) {
    o.warnings.push_back(fmt::format("phase noise {:.4g} rad exceeds pi/(2N) = {:.4g} rad", ic.phase_noise, bound));
  }
  return o;
}

ordered_json constants_json(const SimulationConfig& cfg) {
  return {{"hbar_js", constants::hbar},
          {"planck_js", constants::planck},
          {"bohr_magneton_j_per_t", constants::bohr_magneton},
          {"mu0_h_per_m", constants::mu0},
          {"flux_quantum_wb", constants::flux_quantum},
          {"elementary_charge_c", constants::elementary_charge},
          {"atom_mass_kg", cfg.atom.mass}};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

ChipGeometry build_base_geometry(const SimulationConfig& cfg) {
  ChipGeometry g;
  g.segments = make_z_wire({cfg.wire.bar_length, cfg.wire.lead_length, cfg.wire.current});
  g.bias = {cfg.bias.x, cfg.bias.y, cfg.zbias()};
  return g;
}

Vec3 estimate_trap_position(const SimulationConfig& cfg) {
  if (cfg.bias.y == 0.0) throw ArgumentError("bias.y_t must be nonzero to form a trap");
  const double h = constants::mu0 * std::abs(cfg.wire.current) / (2.0 * constants::pi * std::abs(cfg.bias.y));
  return {0.0, 0.0, h};
}

Scenario build_scenario(const SimulationConfig& cfg) {
  const ChipGeometry base = build_base_geometry(cfg);
  const TrapCharacterization bare = characterize_trap(base, cfg.atom, estimate_trap_position(cfg));
  const Vec3 center{cfg.loop.x.value_or(bare.minimum.x), cfg.loop.y, bare.minimum.z - cfg.loop.separation};
  const CurrentLoop loop(center, cfg.loop.radius, {0.0, 0.0, 1.0}, 0.0);
  return {cfg, base, bare, make_flux_loop_state(loop, cfg.loop.wire_radius, base, cfg.loop.n0, cfg.loop.n1),
          {cfg.atom, cfg.atoms}};
}

ModePair build_modes(const Scenario& s) {
  const InterferometryConfig& ic = s.config.interferometry;
  double d = 0.0, sigma0 = 0.0;
  if (!ic.separation || !ic.sigma0) {
    const auto [g0, g1] = branch_seeds(s.base, s.flux, s.bare.minimum);
    const BranchEnergetics e = branch_energetics(s.base, s.flux, s.condensate, g0, g1);
    d = std::abs(e.trap1.minimum.x - e.trap0.minimum.x);
    sigma0 = ground_width(e.trap0.frequencies, s.config.atom)[0];
  }
  return make_mode_pair(s.config.atom, ic.separation.value_or(d), ic.sigma0.value_or(sigma0), ic.tof);
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"field-profile", "trap",     "flux",
                                                 "entangle",      "interfere", "montecarlo"};
  return names;
}

std::string make_run_id(const SimulationConfig& cfg, const std::string& subcommand) {
  std::string text = subcommand + '\n';
  for (const auto& [k, v] : cfg.echo()) text += k + '=' + v + '\n';
  return fmt::format("{:016x}", fnv1a(text));
}

RunResult run_subcommand(const std::string& name, SimulationConfig cfg, const std::filesystem::path& out,
                         const RunOptions& options) {
  if (std::find(subcommand_names().begin(), subcommand_names().end(), name) == subcommand_names().end()) {
    throw ArgumentError(fmt::format("unknown subcommand '{}'", name));
  }
  if (options.seed) cfg.interferometry.seed = *options.seed;
  if (options.shots) {
    if (*options.shots < 1) throw ArgumentError("--shots must be >= 1");
    cfg.interferometry.shots = *options.shots;
  }
  const std::string id = make_run_id(cfg, name);
  const std::string started = utc_now();
  RunWriter writer(out, id);
  const Scenario s = build_scenario(cfg);

  Outcome o;
  if (name == "field-profile") {
    o = run_field_profile(s, writer);
  } else if (name == "trap") {
    o = run_trap(s, writer);
  } else if (name == "flux") {
    o = run_flux(s, writer);
  } else if (name == "entangle") {
    o = run_entangle(s, writer);
  } else if (name == "interfere") {
    o = run_interfere(s, writer);
  } else {
    o = run_montecarlo(s, writer);
  }
  if (cfg.atoms < 100) o.warnings.emplace_back("N < 100: Thomas-Fermi approximation is not reliable");

  ordered_json meta;
  meta["run_id"] = id;
  meta["subcommand"] = name;
  meta["software_version"] = SCBEC_VERSION;
  meta["seed"] = cfg.interferometry.seed;
  meta["started_utc"] = started;
  meta["finished_utc"] = utc_now();
  ordered_json echo = ordered_json::object();
  for (const auto& [k, v] : cfg.echo()) echo[k] = v;
  meta["config"] = echo;
  meta["constants"] = constants_json(cfg);
  meta["resolved"] = {{"z_bias_t", cfg.zbias()},
                      {"bare_trap", trap_json(s.bare)},
                      {"loop_center_m", vec_json(s.flux.loop.center())}};
  meta["results"] = o.results;
  meta["warnings"] = o.warnings;
  ordered_json files = ordered_json::array();
  for (const auto& f : writer.files()) files.push_back(f.filename().string());
  meta["outputs"] = files;
  writer.write("metadata", "json", meta.dump(2) + "\n");

  return {id, writer.files(), o.warnings};
}

}  // namespace scbec
