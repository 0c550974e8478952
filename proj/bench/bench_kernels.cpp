// Serial reference vs OpenMP kernels on desk-scale workloads.

#include <benchmark/benchmark.h>

#include "dirtyregion/mac_helper.hpp"
#include "dirtyregion/region.hpp"
#include "dirtyregion/search.hpp"

using namespace dirtyregion;

namespace {

const MacHelperParams kMac{5.0, 2.5, 2.5, 12.0};

std::vector<double> alphas(std::size_t n) {
  const double w = std::sqrt(kMac.P0 / kMac.Q);
  return linspace({-w, 2.0 + w}, n);
}
std::vector<double> betas(std::size_t n) {
  const double w = std::sqrt(kMac.P0 / kMac.Q);
  return linspace({-w, w}, n);
}

Pentagon make(double a, double b) { return inner_pentagon(kMac, a, b); }

void BM_PentagonGridSerial(benchmark::State& st) {
  const auto a = alphas(st.range(0)), b = betas(st.range(0) / 2 + 1);
  for (auto _ : st) benchmark::DoNotOptimize(pentagon_grid_serial(a, b, make));
}
void BM_PentagonGridParallel(benchmark::State& st) {
  const auto a = alphas(st.range(0)), b = betas(st.range(0) / 2 + 1);
  for (auto _ : st) benchmark::DoNotOptimize(pentagon_grid_parallel(a, b, make));
}

std::vector<Pentagon> sample_pentagons() {
  return pentagon_grid_serial(alphas(129), betas(65), make);
}

void BM_EnvelopeSerial(benchmark::State& st) {
  const auto ps = sample_pentagons();
  const auto grid = linspace({0.0, 2.0}, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(envelope_serial(ps, grid));
}
void BM_EnvelopeParallel(benchmark::State& st) {
  const auto ps = sample_pentagons();
  const auto grid = linspace({0.0, 2.0}, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(envelope_parallel(ps, grid));
}

const std::vector<std::vector<double>> kRows{{1, 0, 0, 0}, {1, 1, 0, 0}, {0.5, 1, 1, 0},
                                             {1, 0, 1, 1}};
const std::vector<double> kVars{12.0, 5.0, 2.5, 1.0};

void BM_MomentsSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(sample_moments_serial(kRows, kVars, st.range(0), 7));
}
void BM_MomentsParallel(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(sample_moments_parallel(kRows, kVars, st.range(0), 7));
}

}  // namespace

BENCHMARK(BM_PentagonGridSerial)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PentagonGridParallel)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnvelopeSerial)->Arg(513)->Arg(2049)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnvelopeParallel)->Arg(513)->Arg(2049)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsSerial)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentsParallel)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
