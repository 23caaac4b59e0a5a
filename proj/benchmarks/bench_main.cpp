#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fitscape/corpus.hpp"
#include "fitscape/experiment.hpp"
#include "fitscape/metrics.hpp"
#include "fitscape/search.hpp"
#include "fitscape/stats.hpp"

namespace {

using namespace fitscape;

metrics::FitnessWalk plateau_walk(std::size_t k) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution stay(0.9);
  std::uniform_real_distribution<double> unit;
  std::vector<double> v(k);
  double current = unit(rng);
  for (auto& x : v) {
    if (!stay(rng)) current = unit(rng);
    x = current;
  }
  return metrics::FitnessWalk(std::move(v));
}

void BM_ComputeAll(benchmark::State& state) {
  const auto walk = plateau_walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(metrics::compute_all(walk));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeAll)->Arg(1000)->Arg(100000);

void BM_Execute(benchmark::State& state) {
  const auto programs = sut::corpus();
  const auto& program = programs[static_cast<std::size_t>(state.range(0))];
  search::Rng rng(3);
  std::vector<TestCase> tests;
  for (int i = 0; i < 256; ++i) tests.push_back(search::sample_random(program, rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sut::execute(program, tests[i++ % tests.size()]));
  }
  state.SetLabel(program.name());
}
BENCHMARK(BM_Execute)->DenseRange(0, 5);

void BM_RandomWalk(benchmark::State& state) {
  const auto program = sut::corpus_program("numeric");
  search::SearchConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search::random_walk(program, config));
    ++config.seed;
  }
}
BENCHMARK(BM_RandomWalk)->Unit(benchmark::kMillisecond);

void BM_Mio(benchmark::State& state) {
  const auto program = sut::corpus_program("numeric");
  search::SearchConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search::mio(program, config));
    ++config.seed;
  }
}
BENCHMARK(BM_Mio)->Unit(benchmark::kMillisecond);

void BM_RunOnce(benchmark::State& state) {
  const auto program = sut::corpus_program("nested");
  experiment::ExperimentConfig config;
  std::size_t run = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        experiment::run_once(program, experiment::Algorithm::RandomWalk, run++, config));
  }
}
BENCHMARK(BM_RunOnce)->Unit(benchmark::kMillisecond);

void BM_MannWhitney(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
  for (auto& x : a) x = normal(rng);
  for (auto& x : b) x = normal(rng) + 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::mann_whitney_u(a, b));
    benchmark::DoNotOptimize(stats::vargha_delaney_a12(a, b));
  }
}
BENCHMARK(BM_MannWhitney)->Arg(30)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
