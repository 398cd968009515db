#include <benchmark/benchmark.h>

#include "aglearn/learn.hpp"
#include "aglearn/simulate.hpp"

using namespace aglearn;

namespace {

void BM_lp_root_relaxation(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GaussianDataset data = make_dataset(make_instance(d, 2, 1000, 13).samples);
  const CandidateLimits limits{};
  std::vector<ScoredCandidate> pool =
      score_candidates(enumerate_candidates(d, limits), data.covariance, data.n_samples);
  prune_candidates(pool, limits);
  const IpModel model = build_model(active_candidates(pool), d);
  SimplexBackend lp;
  const std::vector<VarFix> free_vars(model.variables.size(), VarFix{-1});
  for (auto _ : state) {
    IpModel copy = model;
    benchmark::DoNotOptimize(lp.solve(copy, free_vars).objective);
  }
  state.counters["vars"] = static_cast<double>(model.variables.size());
}

void BM_full_learn(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GaussianDataset data = make_dataset(make_instance(d, 2, 1000, 17).samples);
  for (auto _ : state) {
    LearnOptions options;
    benchmark::DoNotOptimize(run_learn(data, options).solve.best_score);
  }
}

}  // namespace

BENCHMARK(BM_lp_root_relaxation)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_full_learn)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
