#include <benchmark/benchmark.h>

#include "scbec/interferometry.hpp"

namespace {

const scbec::ModePair kModes = scbec::make_mode_pair(scbec::AtomSpecies::rb87(), 1e-5, 5e-7, 0.1);

void BM_SampleShots(benchmark::State& state) {
  scbec::ShotRequest r;
  r.atoms = state.range(0);
  r.shots = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scbec::sample_shots(r, kModes));
    ++r.seed;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(r.shots));
}
BENCHMARK(BM_SampleShots)->DenseRange(1, 8, 1)->Unit(benchmark::kMillisecond);

void BM_ExtractPeriod(benchmark::State& state) {
  scbec::ShotRequest r;
  r.atoms = 2;
  r.shots = 20000;
  const scbec::InterferenceRecord base = scbec::sample_shots(r, kModes);
  for (auto _ : state) {
    scbec::InterferenceRecord rec = base;
    benchmark::DoNotOptimize(scbec::extract_period(rec));
  }
}
BENCHMARK(BM_ExtractPeriod)->Unit(benchmark::kMillisecond);

}  // namespace
