#include <benchmark/benchmark.h>

#include <map>
#include <thread>
#include <utility>

#include "sptrsv/bsp_schedule.hpp"
#include "sptrsv/compute_dag.hpp"
#include "sptrsv/executor.hpp"
#include "sptrsv/generators.hpp"
#include "sptrsv/growlocal.hpp"

namespace {

using namespace sptrsv;

enum Kind : int { kErdosRenyi = 0, kNarrowBand = 1 };

struct Instance {
  CsrLowerTriangular matrix;
  ComputeDag dag;
};

// Generating a 100k matrix dominates a short benchmark, so instances are shared.
const Instance &instance(int kind, Index n) {
  static std::map<std::pair<int, Index>, Instance> cache;
  auto [it, fresh] = cache.try_emplace({kind, n});
  if (fresh) {
    it->second.matrix =
        kind == kErdosRenyi ? gen_erdos_renyi(n, 10.0 / n, 1) : gen_narrow_bandwidth(n, 0.05, 20, 1);
    it->second.dag = build_dag(it->second.matrix);
  }
  return it->second;
}

void set_nnz_counters(benchmark::State &state, const CsrLowerTriangular &a) {
  state.counters["nnz"] = static_cast<double>(a.nnz());
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * a.nnz()));
}

void BM_BuildDag(benchmark::State &state) {
  const auto &in = instance(static_cast<int>(state.range(0)), static_cast<Index>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(build_dag(in.matrix));
  set_nnz_counters(state, in.matrix);
}

void BM_Wavefront(benchmark::State &state) {
  const auto &in = instance(static_cast<int>(state.range(0)), static_cast<Index>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(wavefront_schedule(in.dag, 8));
  set_nnz_counters(state, in.matrix);
}

void BM_GrowLocal(benchmark::State &state) {
  const auto &in = instance(static_cast<int>(state.range(0)), static_cast<Index>(state.range(1)));
  unsigned supersteps = 0;
  for (auto _ : state) {
    BspSchedule s = growlocal_schedule(in.dag, 8);
    supersteps = s.num_supersteps();
    benchmark::DoNotOptimize(s);
  }
  set_nnz_counters(state, in.matrix);
  state.counters["supersteps"] = supersteps;
}

void BM_FunnelGrowLocal(benchmark::State &state) {
  const auto &in = instance(static_cast<int>(state.range(0)), static_cast<Index>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(growlocal_with_coarsening(in.dag, 8));
  set_nnz_counters(state, in.matrix);
}

void BM_SerialSolve(benchmark::State &state) {
  const auto &in = instance(static_cast<int>(state.range(0)), static_cast<Index>(state.range(1)));
  const DenseVector b(in.matrix.n(), 1.0);
  DenseVector x(in.matrix.n());
  for (auto _ : state) {
    serial_sptrsv(in.matrix, b, x);
    benchmark::ClobberMemory();
  }
  set_nnz_counters(state, in.matrix);
}

template <bool UseGrowLocal>
void BM_ParallelSolve(benchmark::State &state) {
  const auto &in = instance(static_cast<int>(state.range(0)), static_cast<Index>(state.range(1)));
  const unsigned threads = static_cast<unsigned>(state.range(2));
  const BspSchedule s = UseGrowLocal ? growlocal_schedule(in.dag, threads) : wavefront_schedule(in.dag, threads);
  const ExecutablePlan plan = compile_plan(in.dag, s);
  const DenseVector b(in.matrix.n(), 1.0);
  DenseVector x(in.matrix.n());
  BarrierExecutor executor(threads);
  for (auto _ : state) {
    executor.solve(in.matrix, b, x, plan);
    benchmark::ClobberMemory();
  }
  set_nnz_counters(state, in.matrix);
  state.counters["supersteps"] = s.num_supersteps();
}

void scheduling_sizes(benchmark::internal::Benchmark *b) {
  for (int kind : {kErdosRenyi, kNarrowBand}) {
    for (int n : {10000, 100000}) b->Args({kind, n});
  }
}

void solve_sizes(benchmark::internal::Benchmark *b) {
  const int hw = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  for (int kind : {kErdosRenyi, kNarrowBand}) {
    for (int threads : {2, 4}) {
      if (threads <= hw) b->Args({kind, 100000, threads});
    }
  }
  if (hw < 2) b->Args({kNarrowBand, 20000, 2});
}

}  // namespace

BENCHMARK(BM_BuildDag)->Apply(scheduling_sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Wavefront)->Apply(scheduling_sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GrowLocal)->Apply(scheduling_sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FunnelGrowLocal)->Apply(scheduling_sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SerialSolve)->Apply(scheduling_sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ParallelSolve<false>)->Name("BM_ParallelSolve/wavefront")->Apply(solve_sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ParallelSolve<true>)->Name("BM_ParallelSolve/growlocal")->Apply(solve_sizes)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
