#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "scbec/trap.hpp"

namespace scbec {

/// Freely expanded 1-D Gaussian wavepacket released from `center`.
///
/// psi(x) = (sigma0^2/pi)^(1/4) w^(-1/2) exp(-(x - center)^2 / (2 w)),
/// w = sigma0^2 + i hbar t / m.
struct ExpandedMode {
  double center = 0.0;  // m
  double sigma0 = 0.0;  // m
  double t = 0.0;       // s
  AtomSpecies atom;

  void validate() const;
  std::complex<double> complex_width() const;
  std::complex<double> log_amplitude(double x) const;
  std::complex<double> amplitude(double x) const;
  /// Standard deviation of |psi|^2 (m).
  double density_sigma() const;
};

/// Modes released from -d/2 (branch 0) and +d/2 (branch 1).
struct ModePair {
  ExpandedMode first;
  ExpandedMode second;

  double separation() const { return second.center - first.center; }
};
ModePair make_mode_pair(const AtomSpecies& atom, double separation, double sigma0, double t);

/// Single-particle fringe period Lambda = 2 pi hbar (t^2 + (m sigma0^2/hbar)^2) / (t m d).
double fringe_period(double t, const AtomSpecies& atom, double d, double sigma0);

/// Density of the centre of mass X = (x_1 + ... + x_N)/N for
/// (|N,0> + e^{i phi}|0,N>)/sqrt(2), evaluated at each grid point (1/m).
/// `mixed` drops the cross term (equal incoherent mixture).
/// The grid must resolve Lambda/N with at least 8 points per period.
std::vector<double> com_distribution(long atoms, double phi, const ModePair& modes,
                                     const std::vector<double>& grid, bool mixed = false);

/// Single-particle overlap <first|second>.
std::complex<double> mode_overlap(const ModePair& modes);

/// Single-particle density (1/m) of two independent condensates with relative
/// phase theta in one realisation: |psi_A + e^{i theta} psi_B|^2 / norm.
/// Independent of N; fringe period Lambda.
std::vector<double> two_condensate_reference(const ModePair& modes, const std::vector<double>& grid,
                                             double theta = 0.0);

struct Shot {
  std::uint64_t index = 0;
  double phase = 0.0;  // rad
  bool detected = false;
  double com = 0.0;  // m, valid when detected
  std::vector<double> positions;
};

struct Histogram {
  std::vector<double> centers;  // m
  std::vector<double> counts;
  double bin_width = 0.0;
};

/// Uniform histogram of `values` on [lo, hi) with the given bin width.
Histogram make_histogram(const std::vector<double>& values, double lo, double hi, double bin_width);

struct Periodogram {
  std::vector<double> frequencies;  // 1/m
  std::vector<double> power;
};

struct PeriodEstimate {
  bool fringe = false;
  double period = 0.0;  // m
  double visibility = 0.0;
  double peak_power = 0.0;
  double noise_floor = 0.0;
};

struct InterferenceRecord {
  long atoms = 0;
  double lambda = 0.0;      // m
  double period_com = 0.0;  // m, Lambda / N
  std::uint64_t seed = 0;
  bool mixed = false;
  std::vector<Shot> shots;
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
  Histogram histogram;
  Periodogram periodogram;
  PeriodEstimate estimate;

  std::vector<double> retained_com() const;
};

struct ShotRequest {
  long atoms = 2;
  double phi = 0.0;          // rad
  std::uint64_t shots = 1;
  std::uint64_t seed = 0;
  double sigma_phi = 0.0;    // rad
  double efficiency = 1.0;   // (0, 1]
  bool mixed = false;        // sample the incoherent mixture
};

/// Per-shot random stream derived from (seed, shot index).
std::uint64_t shot_stream_seed(std::uint64_t seed, std::uint64_t shot);

/// Exact joint sampling of N <= 8 positions per shot by rejection against
/// the two-branch product envelope, followed by detection thinning.
InterferenceRecord sample_shots(const ShotRequest& request, const ModePair& modes);

/// Control run: each shot draws a uniform relative phase and N independent
/// atoms from the single-particle two-condensate density.
InterferenceRecord sample_reference_shots(const ShotRequest& request, const ModePair& modes);

/// Windowed periodogram of a histogram over [f_lo, f_hi] with spacing df.
Periodogram periodogram(const Histogram& h, double f_lo, double f_hi, double df);

/// Period and visibility from a histogram whose fringes are expected near
/// `expected_period`. No fringe (visibility 0) when the peak power is below
/// three times the noise floor.
PeriodEstimate extract_period(const Histogram& h, double expected_period);

/// Histograms the retained centre-of-mass values (bin = period_com / 16,
/// mean +- 5 std), estimates the period and stores everything in `record`.
PeriodEstimate extract_period(InterferenceRecord& record);

/// Fringe contrast of raw samples at a known spatial frequency q (1/m):
/// V = 2 |mean exp(2 pi i q x)|, its standard error sqrt((2 - V^2)/n) and the
/// Rayleigh p-value for zero contrast.
struct Contrast {
  double visibility = 0.0;
  double standard_error = 0.0;
  double rayleigh_p = 1.0;
  std::size_t samples = 0;
};
Contrast contrast_at(const std::vector<double>& values, double frequency);

}  // namespace scbec
