#include <benchmark/benchmark.h>

#include "scbec/trap.hpp"

namespace {

scbec::ChipGeometry z_trap() {
  scbec::ChipGeometry g;
  g.segments = scbec::make_z_wire({5e-3, 2e-3, 5.0});
  g.bias = {1e-4, 2e-3, 1.3e-5};
  return g;
}

void BM_FindMinimum(benchmark::State& state) {
  const auto g = z_trap();
  const auto atom = scbec::AtomSpecies::rb87();
  for (auto _ : state) {
    benchmark::DoNotOptimize(scbec::find_minimum(g, atom, {1e-5, 1e-5, 4.7e-4}));
  }
}
BENCHMARK(BM_FindMinimum)->Unit(benchmark::kMicrosecond);

void BM_CharacterizeTrap(benchmark::State& state) {
  const auto g = z_trap();
  const auto atom = scbec::AtomSpecies::rb87();
  for (auto _ : state) {
    benchmark::DoNotOptimize(scbec::characterize_trap(g, atom, {0, 0, 4.9e-4}));
  }
}
BENCHMARK(BM_CharacterizeTrap)->Unit(benchmark::kMicrosecond);

}  // namespace
