#include "scbec/interferometry.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "scbec/constants.hpp"
#include "scbec/errors.hpp"

namespace scbec {

using cd = std::complex<double>;

void ExpandedMode::validate() const {
  atom.validate();
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw ArgumentError("mode width sigma0 must be positive");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ArgumentError("expansion time must be >= 0");
  if (!std::isfinite(center)) throw ArgumentError("mode centre must be finite");
}

cd ExpandedMode::complex_width() const {
  return {sigma0 * sigma0, constants::hbar * t / atom.mass};
}

cd ExpandedMode::log_amplitude(double x) const {
  const cd w = complex_width();
  const double dx = x - center;
  return 0.25 * std::log(sigma0 * sigma0 / constants::pi) - 0.5 * std::log(w) - dx * dx / (2.0 * w);
}

cd ExpandedMode::amplitude(double x) const { return std::exp(log_amplitude(x)); }

double ExpandedMode::density_sigma() const {
  return std::abs(complex_width()) / (std::sqrt(2.0) * sigma0);
}

ModePair make_mode_pair(const AtomSpecies& atom, double separation, double sigma0, double t) {
  if (!(separation > 0.0)) throw ArgumentError("mode separation d must be positive");
  ModePair m{{-0.5 * separation, sigma0, t, atom}, {0.5 * separation, sigma0, t, atom}};
  m.first.validate();
  m.second.validate();
  return m;
}

double fringe_period(double t, const AtomSpecies& atom, double d, double sigma0) {
  if (!(t > 0.0) || !(d > 0.0) || !(sigma0 > 0.0)) {
    throw ArgumentError("fringe period needs t, d and sigma0 > 0");
  }
  atom.validate();
  const double m = atom.mass;
  const double chirp = m * sigma0 * sigma0 / constants::hbar;
  return 2.0 * constants::pi * constants::hbar * (t * t + chirp * chirp) / (t * m * d);
}

namespace {

void check_pair(const ModePair& modes) {
  modes.first.validate();
  modes.second.validate();
  if (modes.first.sigma0 != modes.second.sigma0 || modes.first.t != modes.second.t ||
      modes.first.atom.mass != modes.second.atom.mass) {
    throw ArgumentError("modes must share sigma0, t and atom");
  }
}

// conj(psi_p(x)) psi_q(x) = exp(alpha x^2 + beta x + gamma).
struct GaussianProduct {
  double alpha;
  cd beta;
  cd gamma;
};

GaussianProduct product(const ExpandedMode& p, const ExpandedMode& q) {
  const cd w = q.complex_width();
  const cd wc = std::conj(w);
  const cd log_c = 0.25 * std::log(q.sigma0 * q.sigma0 / constants::pi) - 0.5 * std::log(w);
  GaussianProduct g;
  g.alpha = -(1.0 / w).real();
  g.beta = p.center / wc + q.center / w;
  g.gamma = -p.center * p.center / (2.0 * wc) - q.center * q.center / (2.0 * w) + std::conj(log_c) + log_c;
  return g;
}

// Log of the centre-of-mass marginal of prod_i f(x_i).
cd log_marginal(const GaussianProduct& g, long n, double x) {
  const double nn = static_cast<double>(n);
  return 0.5 * std::log(nn) + 0.5 * (nn - 1.0) * std::log(constants::pi / -g.alpha) +
         nn * (g.alpha * x * x + g.beta * x + g.gamma);
}

cd integral(const GaussianProduct& g) {
  return std::sqrt(constants::pi / -g.alpha) * std::exp(g.gamma - g.beta * g.beta / (4.0 * g.alpha));
}

void check_grid(const std::vector<double>& grid, double period) {
  if (grid.size() < 2) throw ArgumentError("density grid needs at least two points");
  double worst = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) worst = std::max(worst, std::abs(grid[i] - grid[i - 1]));
  if (period > 0.0 && worst > period / 8.0) {
    throw SamplingResolutionError(fmt::format(
        "grid spacing {:.3e} m is coarser than 1/8 of the expected period {:.3e} m", worst, period));
  }
}

double expected_lambda(const ModePair& m) {
  return m.first.t > 0.0 ? fringe_period(m.first.t, m.first.atom, m.separation(), m.first.sigma0) : 0.0;
}

// Probability of accepting a proposal from the two-branch product envelope:
// |a + b|^2 / (2 (|a|^2 + |b|^2)) with a, b given as logs.
double acceptance(cd log_a, cd log_b) {
  const double m = std::max(log_a.real(), log_b.real());
  const cd a = std::exp(log_a - m);
  const cd b = std::exp(log_b - m);
  return std::norm(a + b) / (2.0 * (std::norm(a) + std::norm(b)));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kMaxAttemptsPerShot = 10000;

void check_request(const ShotRequest& r) {
  if (r.atoms < 1 || r.atoms > 8) throw ArgumentError("exact joint sampling supports 1 <= N <= 8");
  if (r.shots < 1) throw ArgumentError("need at least one shot");
  if (!(r.sigma_phi >= 0.0) || !std::isfinite(r.sigma_phi)) throw ArgumentError("sigma_phi must be >= 0");
  if (!(r.efficiency > 0.0 && r.efficiency <= 1.0)) throw ArgumentError("efficiency must lie in (0, 1]");
  if (!std::isfinite(r.phi)) throw ArgumentError("phase must be finite");
}

void thin(Shot& shot, double efficiency, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool all = true;
  for (std::size_t i = 0; i < shot.positions.size(); ++i) all = (u(rng) < efficiency) && all;
  shot.detected = all;
  if (all) {
    shot.com = std::accumulate(shot.positions.begin(), shot.positions.end(), 0.0) /
               static_cast<double>(shot.positions.size());
  } else {
    shot.positions.clear();
  }
}

InterferenceRecord make_record(const ShotRequest& r, const ModePair& modes) {
  InterferenceRecord rec;
  rec.atoms = r.atoms;
  rec.lambda = expected_lambda(modes);
  rec.period_com = rec.lambda / static_cast<double>(r.atoms);
  rec.seed = r.seed;
  rec.mixed = r.mixed;
  rec.shots.reserve(r.shots);
  return rec;
}

}  // namespace

cd mode_overlap(const ModePair& modes) {
  check_pair(modes);
  return integral(product(modes.first, modes.second));
}

std::vector<double> com_distribution(long atoms, double phi, const ModePair& modes,
                                     const std::vector<double>& grid, bool mixed) {
  check_pair(modes);
  if (atoms < 1) throw ArgumentError("centre-of-mass density needs N >= 1");
  if (!std::isfinite(phi)) throw ArgumentError("phase must be finite");
  check_grid(grid, expected_lambda(modes) / static_cast<double>(atoms));

  const GaussianProduct aa = product(modes.first, modes.first);
  const GaussianProduct bb = product(modes.second, modes.second);
  const GaussianProduct ab = product(modes.first, modes.second);
  const cd rot = std::polar(1.0, phi);
  const double norm =
      mixed ? 2.0 : 2.0 * (1.0 + (rot * std::pow(integral(ab), static_cast<double>(atoms))).real());
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    double v = std::exp(log_marginal(aa, atoms, x).real()) + std::exp(log_marginal(bb, atoms, x).real());
    if (!mixed) v += 2.0 * (rot * std::exp(log_marginal(ab, atoms, x))).real();
    out[i] = v / norm;
  }
  return out;
}

std::vector<double> two_condensate_reference(const ModePair& modes, const std::vector<double>& grid,
                                             double theta) {
  check_pair(modes);
  check_grid(grid, expected_lambda(modes));
  const cd rot = std::polar(1.0, theta);
  const double norm = 2.0 * (1.0 + (rot * integral(product(modes.first, modes.second))).real());
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = std::norm(modes.first.amplitude(grid[i]) + rot * modes.second.amplitude(grid[i])) / norm;
  }
  return out;
}

std::vector<double> InterferenceRecord::retained_com() const {
  std::vector<double> out;
  for (const auto& s : shots) {
    if (s.detected) out.push_back(s.com);
  }
  return out;
}

std::uint64_t shot_stream_seed(std::uint64_t seed, std::uint64_t shot) {
  return splitmix64(splitmix64(seed) ^ shot);
}

InterferenceRecord sample_shots(const ShotRequest& r, const ModePair& modes) {
  check_request(r);
  check_pair(modes);
  const double sigma = modes.first.density_sigma();
  if (!r.mixed) {
    // Mean acceptance of the envelope proposal is (1 + Re(e^{i phi} <A|B>^N)) / 2.
    const cd s = std::pow(mode_overlap(modes), static_cast<double>(r.atoms));
    const double mean_accept = 0.5 * (1.0 + (std::polar(1.0, r.phi) * s).real());
    if (mean_accept < 1e-4) {
      throw SamplerInefficiencyError(fmt::format(
          "rejection acceptance {:.3e} < 1e-4; use a smaller N or a longer expansion time", mean_accept));
    }
  }

  InterferenceRecord rec = make_record(r, modes);
  const auto n = static_cast<std::size_t>(r.atoms);
  for (std::uint64_t k = 0; k < r.shots; ++k) {
    std::mt19937_64 rng(shot_stream_seed(r.seed, k));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Shot shot;
    shot.index = k;
    shot.phase = r.phi + r.sigma_phi * gauss(rng);
    shot.positions.resize(n);
    std::uint64_t tries = 0;
    for (;;) {
      if (++tries > kMaxAttemptsPerShot) {
        throw SamplerInefficiencyError(fmt::format(
            "shot {}: no sample accepted in {} proposals (acceptance < 1e-4); use a smaller N or a "
            "longer expansion time",
            k, kMaxAttemptsPerShot));
      }
      const ExpandedMode& branch = u(rng) < 0.5 ? modes.first : modes.second;
      cd la = 0.0, lb = shot.phase * cd(0.0, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        shot.positions[i] = branch.center + sigma * gauss(rng);
        la += modes.first.log_amplitude(shot.positions[i]);
        lb += modes.second.log_amplitude(shot.positions[i]);
      }
      const double p = r.mixed ? 1.0 : acceptance(la, lb);
      if (u(rng) < p) break;
    }
    rec.attempts += tries;
    rec.accepted += 1;
    thin(shot, r.efficiency, rng);
    rec.shots.push_back(std::move(shot));
  }
  return rec;
}

InterferenceRecord sample_reference_shots(const ShotRequest& r, const ModePair& modes) {
  check_request(r);
  check_pair(modes);
  const double sigma = modes.first.density_sigma();
  InterferenceRecord rec = make_record(r, modes);
  const auto n = static_cast<std::size_t>(r.atoms);
  for (std::uint64_t k = 0; k < r.shots; ++k) {
    std::mt19937_64 rng(shot_stream_seed(r.seed, k));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Shot shot;
    shot.index = k;
    shot.phase = 2.0 * constants::pi * u(rng);
    const cd i_theta = shot.phase * cd(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t tries = 0;
      for (;;) {
        if (++tries > kMaxAttemptsPerShot) {
          throw SamplerInefficiencyError(fmt::format("reference shot {}: acceptance < 1e-4", k));
        }
        const ExpandedMode& branch = u(rng) < 0.5 ? modes.first : modes.second;
        const double x = branch.center + sigma * gauss(rng);
        if (u(rng) < acceptance(modes.first.log_amplitude(x), modes.second.log_amplitude(x) + i_theta)) {
          shot.positions.push_back(x);
          break;
        }
      }
      rec.attempts += tries;
    }
    rec.accepted += 1;
    thin(shot, r.efficiency, rng);
    rec.shots.push_back(std::move(shot));
  }
  return rec;
}

Histogram make_histogram(const std::vector<double>& values, double lo, double hi, double bin_width) {
  if (!(bin_width > 0.0) || !(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError("histogram needs lo < hi and a positive bin width");
  }
  const auto bins = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width));
  Histogram h;
  h.bin_width = bin_width;
  h.counts.assign(bins, 0.0);
  h.centers.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) h.centers[i] = lo + (static_cast<double>(i) + 0.5) * bin_width;
  for (double v : values) {
    if (!(v >= lo)) continue;
    const auto i = static_cast<std::size_t>((v - lo) / bin_width);
    if (i < bins) h.counts[i] += 1.0;
  }
  return h;
}

namespace {

std::vector<double> hann(std::size_t m) {
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = std::sin(constants::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(m));
    w[i] = s * s;
  }
  return w;
}

cd windowed_transform(const Histogram& h, const std::vector<double>& w, double f) {
  cd acc = 0.0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    acc += w[i] * h.counts[i] * std::polar(1.0, -2.0 * constants::pi * f * h.centers[i]);
  }
  return acc;
}

struct Moments {
  double total = 0.0;
  double mean = 0.0;
  double std = 0.0;
};

Moments histogram_moments(const Histogram& h) {
  Moments m;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    m.total += h.counts[i];
    m.mean += h.counts[i] * h.centers[i];
  }
  if (!(m.total > 0.0)) throw ArgumentError("histogram is empty");
  m.mean /= m.total;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double d = h.centers[i] - m.mean;
    m.std += h.counts[i] * d * d;
  }
  m.std = std::sqrt(m.std / m.total);
  return m;
}

std::pair<Periodogram, PeriodEstimate> analyse(const Histogram& h, double expected_period) {
  if (!(expected_period > 0.0)) throw ArgumentError("expected period must be positive");
  const std::size_t m = h.counts.size();
  const double range = static_cast<double>(m) * h.bin_width;
  if (range < 3.0 * expected_period) {
    throw ArgumentError(fmt::format("histogram spans {:.3e} m, fewer than three expected periods ({:.3e} m)",
                                    range, expected_period));
  }
  const Moments mo = histogram_moments(h);
  const double f_hi = 0.5 / h.bin_width;
  const double f_lo = std::max(10.0 / range, mo.std > 0.0 ? 1.0 / mo.std : 0.0);
  if (!(f_lo < f_hi)) throw ArgumentError("histogram bins too coarse for a frequency search");

  const std::vector<double> w = hann(m);
  Periodogram pg = periodogram(h, f_lo, f_hi, 0.25 / range);
  const auto peak = std::max_element(pg.power.begin(), pg.power.end());
  const auto k = static_cast<std::size_t>(peak - pg.power.begin());

  // Golden-section refinement between the neighbouring grid frequencies.
  double a = pg.frequencies[k == 0 ? 0 : k - 1];
  double b = pg.frequencies[std::min(k + 1, pg.frequencies.size() - 1)];
  const auto power = [&](double f) { return std::norm(windowed_transform(h, w, f)); };
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double pc = power(c), pd = power(d);
  for (int it = 0; it < 60 && b - a > 1e-12 * b; ++it) {
    if (pc > pd) {
      b = d;
      d = c;
      pd = pc;
      c = b - ratio * (b - a);
      pc = power(c);
    } else {
      a = c;
      c = d;
      pc = pd;
      d = a + ratio * (b - a);
      pd = power(d);
    }
  }
  double f_best = 0.5 * (a + b);
  double p_best = power(f_best);
  if (p_best < *peak) {
    f_best = pg.frequencies[k];
    p_best = *peak;
  }

  // Expected noise power of independent counts, or the empirical level if larger.
  std::vector<double> sorted = pg.power;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                   sorted.end());
  const double median = sorted[sorted.size() / 2];
  double poisson = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    poisson += w[i] * w[i] * h.counts[i];
    weighted += w[i] * h.counts[i];
  }
  const double looks = std::max(std::log(static_cast<double>(pg.frequencies.size()) / 4.0), 1.0);

  PeriodEstimate est;
  est.peak_power = p_best;
  est.noise_floor = std::max(median / std::log(2.0), poisson) * looks;
  est.period = 1.0 / f_best;
  if (p_best < 3.0 * est.noise_floor || !(weighted > 0.0)) return {std::move(pg), est};

  const double arg = constants::pi * f_best * h.bin_width;
  const double bin_response = std::sin(arg) / arg;
  est.fringe = true;
  est.visibility = std::clamp(2.0 * std::sqrt(p_best) / weighted / bin_response, 0.0, 1.0);
  return {std::move(pg), est};
}

}  // namespace

Periodogram periodogram(const Histogram& h, double f_lo, double f_hi, double df) {
  if (!(df > 0.0) || !(f_hi > f_lo) || !(f_lo >= 0.0)) throw ArgumentError("bad periodogram frequency range");
  if (h.counts.empty()) throw ArgumentError("histogram is empty");
  const std::vector<double> w = hann(h.counts.size());
  Periodogram pg;
  const auto count = static_cast<std::size_t>(std::floor((f_hi - f_lo) / df)) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    const double f = f_lo + df * static_cast<double>(i);
    pg.frequencies.push_back(f);
    pg.power.push_back(std::norm(windowed_transform(h, w, f)));
  }
  return pg;
}

PeriodEstimate extract_period(const Histogram& h, double expected_period) {
  return analyse(h, expected_period).second;
}

PeriodEstimate extract_period(InterferenceRecord& record) {
  const std::vector<double> com = record.retained_com();
  if (com.size() < 10) {
    throw ArgumentError(fmt::format("period extraction needs >= 10 retained shots, have {}", com.size()));
  }
  if (!(record.period_com > 0.0)) throw ArgumentError("record has no expected period (t = 0?)");
  const double mean = std::accumulate(com.begin(), com.end(), 0.0) / static_cast<double>(com.size());
  double var = 0.0;
  for (double x : com) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(com.size()));
  const double half = std::max(5.0 * sd, 2.0 * record.period_com);
  record.histogram = make_histogram(com, mean - half, mean + half, record.period_com / 16.0);
  auto [pg, est] = analyse(record.histogram, record.period_com);
  record.periodogram = std::move(pg);
  record.estimate = est;
  return est;
}

Contrast contrast_at(const std::vector<double>& values, double frequency) {
  if (values.empty()) throw ArgumentError("contrast needs at least one sample");
  cd sum = 0.0;
  for (double x : values) sum += std::polar(1.0, 2.0 * constants::pi * frequency * x);
  const double n = static_cast<double>(values.size());
  Contrast c;
  c.samples = values.size();
  c.visibility = 2.0 * std::abs(sum) / n;
  c.standard_error = std::sqrt(std::max(2.0 - c.visibility * c.visibility, 0.0) / n);
  const double z = std::norm(sum) / n;
  const double p = std::exp(-z) * (1.0 + (2.0 * z - z * z) / (4.0 * n) -
                                   (24.0 * z - 132.0 * z * z + 76.0 * z * z * z - 9.0 * z * z * z * z) /
                                       (288.0 * n * n));
  c.rayleigh_p = std::clamp(p, 0.0, 1.0);
  return c;
}

}  // namespace scbec
