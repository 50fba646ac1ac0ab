// Serial reference kernels against the OpenMP kernels on the same inputs.
// Thread count comes from OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "sbqa/coloring.hpp"
#include "sbqa/forge.hpp"
#include "sbqa/solvers.hpp"
#include "sbqa_reference.hpp"

using namespace sbqa;
using namespace sbqa::reference;

namespace {

const IsingModel& zephyr_model() {
  static const IsingModel m = gen_zephyr_instance(2, 1);
  return m;
}

const IsingModel& dense_model() {
  static const IsingModel m = ising_on_graph(gen_complete(256), dist::Normal{}, 1);
  return m;
}

const IsingModel& pick(int which) { return which == 0 ? zephyr_model() : dense_model(); }

void label(benchmark::State& state, const IsingModel& m) {
  state.SetLabel(std::to_string(m.size()) + " spins");
}

void BM_sbm_serial(benchmark::State& state) {
  const auto& m = pick(static_cast<int>(state.range(0)));
  SbmParams p;
  p.n_steps = 200;
  p.n_replicas = 64;
  for (auto _ : state) benchmark::DoNotOptimize(sbm_serial(m, p, 1).best_energy);
  label(state, m);
}

void BM_sbm_omp(benchmark::State& state) {
  const auto& m = pick(static_cast<int>(state.range(0)));
  SbmParams p;
  p.n_steps = 200;
  p.n_replicas = 64;
  for (auto _ : state) benchmark::DoNotOptimize(sbm_solve(m, p, 1).best_energy);
  label(state, m);
}

void BM_sbqa_serial(benchmark::State& state) {
  const auto& m = pick(static_cast<int>(state.range(0)));
  SbqaParams p;
  p.n_steps = 200;
  p.replicas = 16;
  p.n_sets = 4;
  for (auto _ : state) benchmark::DoNotOptimize(sbqa_serial(m, p, 1).best_energy);
  label(state, m);
}

void BM_sbqa_omp(benchmark::State& state) {
  const auto& m = pick(static_cast<int>(state.range(0)));
  SbqaParams p;
  p.n_steps = 200;
  p.replicas = 16;
  p.n_sets = 4;
  for (auto _ : state) benchmark::DoNotOptimize(sbqa_solve(m, p, 1).best_energy);
  label(state, m);
}

void BM_sa_serial(benchmark::State& state) {
  const auto& m = pick(static_cast<int>(state.range(0)));
  SaParams p;
  p.sweeps = 200;
  p.n_reads = 16;
  for (auto _ : state) benchmark::DoNotOptimize(sa_serial(m, p, 1).best_energy);
  label(state, m);
}

void BM_sa_omp(benchmark::State& state) {
  const auto& m = pick(static_cast<int>(state.range(0)));
  SaParams p;
  p.sweeps = 200;
  p.n_reads = 16;
  for (auto _ : state) benchmark::DoNotOptimize(sa_solve(m, p, 1).best_energy);
  label(state, m);
}

void BM_dtsqa_serial(benchmark::State& state) {
  const auto& m = pick(static_cast<int>(state.range(0)));
  const auto coloring = dsatur_coloring(m.adjacency());
  DtsqaParams p;
  p.n_steps = 200;
  for (auto _ : state) benchmark::DoNotOptimize(dtsqa_serial(m, p, coloring, 1).best_energy);
  label(state, m);
}

void BM_dtsqa_omp(benchmark::State& state) {
  const auto& m = pick(static_cast<int>(state.range(0)));
  const auto coloring = dsatur_coloring(m.adjacency());
  DtsqaParams p;
  p.n_steps = 200;
  for (auto _ : state) benchmark::DoNotOptimize(dtsqa_solve(m, p, coloring, 1).best_energy);
  label(state, m);
}

}  // namespace

// Argument 0: sparse Zephyr Z2, 1: dense K256.
BENCHMARK(BM_sbm_serial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sbm_omp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sbqa_serial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sbqa_omp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sa_serial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sa_omp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dtsqa_serial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dtsqa_omp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
