// Serial vs OpenMP diagonal kernels, and the divide-and-conquer aligner
// against the textbook solver.

#include <benchmark/benchmark.h>

#include <random>

#include "linmdtw/diag_engine.hpp"
#include "linmdtw/linmdtw.hpp"
#include "linmdtw/oracle.hpp"
#include "linmdtw/synth.hpp"

using namespace lmdtw;

namespace {

std::pair<FeatureSeries, FeatureSeries> pair_of(std::size_t n) {
  SynthOptions o;
  o.length = n;
  o.dim = 12;
  o.seed = 1;
  return synthesize_pair(o);
}

void run_diagonals(benchmark::State& state, ExecutionMode mode) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto [x, y] = pair_of(n);
  DiagRunOptions o;
  o.mode = mode;
  o.parallel_min_length = 256;
  for (auto _ : state) {
    auto r = diag_dtw<float>(x.view(), y.view(), {}, 2 * n - 2, o);
    benchmark::DoNotOptimize(r.buffers.d[2][0]);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

void BM_DiagSerial(benchmark::State& s) { run_diagonals(s, ExecutionMode::sequential); }
void BM_DiagParallel(benchmark::State& s) { run_diagonals(s, ExecutionMode::parallel); }

void BM_Linmdtw(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto [x, y] = pair_of(n);
  LinMdtwConfig cfg;
  cfg.min_dim = 64;
  cfg.precision = Precision::f32;
  for (auto _ : state) benchmark::DoNotOptimize(linmdtw(x, y, {}, cfg).cost);
}

void BM_DtwFull(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto [x, y] = pair_of(n);
  OracleOptions o;
  o.precision = Precision::f32;
  for (auto _ : state) benchmark::DoNotOptimize(dtw_full(x, y, {}, o).cost);
}

}  // namespace

BENCHMARK(BM_DiagSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiagParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Linmdtw)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DtwFull)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
