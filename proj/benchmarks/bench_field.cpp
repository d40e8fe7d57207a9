#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "scbec/magnetostatics.hpp"

namespace {

scbec::ChipGeometry chip() {
  scbec::ChipGeometry g;
  g.segments = scbec::make_z_wire({5e-3, 2e-3, 5.0});
  g.bias = {1e-4, 2e-3, 1.3e-5};
  g.loops.emplace_back(scbec::Vec3{0, 0, 4.8e-4}, 5e-6, scbec::Vec3{0, 0, 1}, 7e-5);
  return g;
}

std::vector<scbec::Vec3> points(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<scbec::Vec3> out(n);
  for (auto& p : out) p = {u(rng) * 2e-5, u(rng) * 2e-5, 4.9e-4 + u(rng) * 1e-5};
  return out;
}

void BM_TotalField(benchmark::State& state) {
  const auto g = chip();
  const auto pts = points(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scbec::total_field(g, pts[i++ & 1023]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TotalField);

void BM_LoopField(benchmark::State& state) {
  const scbec::CurrentLoop loop({0, 0, 0}, 5e-6, {0, 0, 1}, 7e-5);
  const auto pts = points(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scbec::loop_field(loop, pts[i++ & 1023] - scbec::Vec3{0, 0, 4.8e-4}));
  }
}
BENCHMARK(BM_LoopField);

void BM_FieldDerivatives(benchmark::State& state) {
  const auto g = chip();
  const auto pts = points(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scbec::field_derivatives(g, pts[i++ & 1023]));
  }
}
BENCHMARK(BM_FieldDerivatives);

}  // namespace
