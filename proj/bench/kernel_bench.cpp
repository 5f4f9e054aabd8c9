// Serial reference kernels against their OpenMP counterparts. The pssim
// `bench` subcommand covers the participants x days scaling grid; this
// binary isolates per-kernel speedup.

#include <benchmark/benchmark.h>

#include "pssim/aggregation.hpp"
#include "pssim/parallel.hpp"
#include "pssim/serial_reference.hpp"
#include "pssim/simulator.hpp"

namespace {

pssim::SimConfig config_for(benchmark::State& state) {
  pssim::SimConfig c = pssim::default_config();
  c.n = static_cast<std::size_t>(state.range(0));
  c.tau = static_cast<int>(state.range(1));
  c.prLie = 0.1;
  return c;
}

void BM_SimulateSerial(benchmark::State& state) {
  const auto c = config_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(pssim::serial::simulate(c));
}

void BM_SimulateParallel(benchmark::State& state) {
  const auto c = config_for(state);
  pssim::set_worker_count(static_cast<int>(state.range(2)));
  for (auto _ : state) benchmark::DoNotOptimize(pssim::simulate(c));
  pssim::set_worker_count(0);
}

std::vector<pssim::ReportRecord> trace_records(benchmark::State& state) {
  const auto c = config_for(state);
  return pssim::records_from_trace(pssim::simulate(c).reports, c.loc);
}

void BM_AggregateSerial(benchmark::State& state) {
  const auto records = trace_records(state);
  for (auto _ : state) benchmark::DoNotOptimize(pssim::serial::aggregate(records));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(records.size()));
}

void BM_AggregateParallel(benchmark::State& state) {
  const auto records = trace_records(state);
  const auto workers = static_cast<int>(state.range(2));
  pssim::set_worker_count(workers);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pssim::aggregate(records, {static_cast<std::size_t>(workers), 1}));
  }
  pssim::set_worker_count(0);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(records.size()));
}

// Args: participants, days, workers.
void grid(benchmark::internal::Benchmark* b, std::initializer_list<int> workers) {
  for (int n : {1000, 10000}) {
    for (int m : {28, 100}) {
      for (int w : workers) b->Args({n, m, w});
    }
  }
  b->Unit(benchmark::kMillisecond);
}

void serial_grid(benchmark::internal::Benchmark* b) { grid(b, {1}); }
void parallel_grid(benchmark::internal::Benchmark* b) { grid(b, {1, 2, 4}); }

}  // namespace

BENCHMARK(BM_SimulateSerial)->Apply(serial_grid);
BENCHMARK(BM_SimulateParallel)->Apply(parallel_grid);
BENCHMARK(BM_AggregateSerial)->Apply(serial_grid);
BENCHMARK(BM_AggregateParallel)->Apply(parallel_grid);

BENCHMARK_MAIN();
