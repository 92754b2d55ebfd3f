// Serial reference kernels against their OpenMP counterparts on real transfer matrices.
#include <benchmark/benchmark.h>

#include "gdl/loss.hpp"
#include "gdl/problem.hpp"
#include "gdl/solver.hpp"

using namespace gdl;

namespace {

const TransferSystem& system_2dom(int n) { return *cached_system(get_problem("2dom"), n, true); }

BandSystem& band_2dom(int h) {
  static auto band = cached_band(get_problem("2dom"), h);
  return *band;
}

std::vector<Cost> zero_vector(std::size_t n) { return std::vector<Cost>(n, 0); }

template <bool Parallel>
void BM_MatVec(benchmark::State& state) {
  const auto& sys = system_2dom(static_cast<int>(state.range(0)));
  auto v = zero_vector(sys.T.dim);
  for (auto _ : state) {
    auto w = Parallel ? mat_vec(sys.T, v) : serial::mat_vec(sys.T, v);
    benchmark::DoNotOptimize(w.data());
  }
  state.counters["nnz"] = static_cast<double>(sys.T.nnz());
}

template <bool Parallel>
void BM_DenseMul(benchmark::State& state) {
  const auto& a = band_2dom(6).band_dense();
  for (auto _ : state) {
    auto c = Parallel ? mul(a, a) : serial::mul(a, a);
    benchmark::DoNotOptimize(c.min());
  }
  state.counters["dim"] = static_cast<double>(a.dim());
}

template <bool Parallel>
void BM_DenseSparseMul(benchmark::State& state) {
  auto& band = band_2dom(6);
  const auto& a = band.band_dense();
  const auto& b = band.band();
  for (auto _ : state) {
    auto c = Parallel ? mul(a, b) : serial::mul(a, b);
    benchmark::DoNotOptimize(c.min());
  }
  state.counters["nnz"] = static_cast<double>(b.nnz());
}

}  // namespace

BENCHMARK(BM_MatVec<false>)->Arg(10)->Arg(12)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatVec<true>)->Arg(10)->Arg(12)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DenseMul<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseMul<true>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseSparseMul<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseSparseMul<true>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
