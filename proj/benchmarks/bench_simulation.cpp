#include <benchmark/benchmark.h>

#include "onc/simulator.hpp"

namespace {

using namespace onc;

void run_one(benchmark::State& state, Algorithm alg) {
  SimConfig c;
  c.n_receivers = static_cast<std::size_t>(state.range(0));
  c.epsilons.assign(c.n_receivers, 0.25);
  c.m_packets = static_cast<std::size_t>(state.range(1));
  c.algorithm = alg;
  if (uses_threshold(alg)) c.threshold = 10;
  std::uint64_t run = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_sim(c, run++).slots);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.m_packets));
}

void BM_Anc(benchmark::State& s) { run_one(s, Algorithm::kAnc); }
void BM_Snc(benchmark::State& s) { run_one(s, Algorithm::kSnc); }
void BM_Snct(benchmark::State& s) { run_one(s, Algorithm::kSnct); }

BENCHMARK(BM_Anc)->Args({2, 100})->Args({8, 100})->Args({8, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Snc)->Args({2, 100})->Args({8, 100})->Args({8, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Snct)->Args({8, 100})->Unit(benchmark::kMillisecond);

}  // namespace
