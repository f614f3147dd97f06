// Serial reference kernels against their OpenMP counterparts.
//   ./bench_kernels --benchmark_filter=pair

#include <benchmark/benchmark.h>

#include <memory>

#include "pinwheel/diffraction.hpp"
#include "pinwheel/kernels.hpp"
#include "pinwheel/substitution.hpp"

using namespace pinwheel;

namespace {

const Patch& patch(unsigned level) {
  static std::vector<std::unique_ptr<Patch>> cache(11);
  if (!cache[level]) cache[level] = std::make_unique<Patch>(generate_patch(level, Prototile::t_plus, Backend::serial));
  return *cache[level];
}

template <Backend B>
void expand(benchmark::State& state) {
  const auto level = static_cast<unsigned>(state.range(0));
  const auto children = expanded_child_maps(pinwheel_dissection());
  const auto& tiles = patch(level).tiles;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::expand_tiles(B, tiles, children, 5));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tiles.size() * children.size()));
}

template <Backend B>
void pairs(benchmark::State& state) {
  const auto level = static_cast<unsigned>(state.range(0));
  const auto pts = control_points(patch(level));
  // r^2 <= 5 in fixed units
  std::int64_t max_d2 = 5;
  for (unsigned i = 0; i < level; ++i) max_d2 *= 5;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pair_histogram(B, pts, {}, max_d2));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}

template <Backend B>
void bessel(benchmark::State& state) {
  const RadialMeasure m = square_lattice_measure(static_cast<std::uint64_t>(state.range(0)));
  std::vector<double> radii, weights;
  for (const auto& [key, w] : m) {
    radii.push_back(key.radius());
    weights.push_back(w);
  }
  const auto ks = k_grid(3.0, 1200);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::bessel_j0_sum(B, radii, weights, ks));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(radii.size() * ks.size()));
}

}  // namespace

BENCHMARK(expand<Backend::serial>)->Name("expand_tiles/serial")->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(expand<Backend::parallel>)->Name("expand_tiles/omp")->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(pairs<Backend::serial>)->Name("pair_histogram/serial")->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(pairs<Backend::parallel>)->Name("pair_histogram/omp")->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(bessel<Backend::serial>)->Name("bessel_j0_sum/serial")->Arg(100)->Arg(625)->Unit(benchmark::kMillisecond);
BENCHMARK(bessel<Backend::parallel>)->Name("bessel_j0_sum/omp")->Arg(100)->Arg(625)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
