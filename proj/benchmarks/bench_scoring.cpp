#include <benchmark/benchmark.h>

#include "aglearn/candidates.hpp"
#include "aglearn/simulate.hpp"

using namespace aglearn;

namespace {

GaussianDataset bench_data(int d, int n) {
  return make_dataset(make_instance(d, 2, n, 99).samples);
}

void BM_fit_pair_component(benchmark::State& state) {
  const GaussianDataset data = bench_data(static_cast<int>(state.range(0)), 1000);
  CComponent c;
  c.district = node_bit(0) | node_bit(1);
  c.bidirected = {{0, 1}};
  c.parents = {node_bit(2), node_bit(3)};
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_mle(c, data.covariance, data.n_samples).loglik);
}

void BM_score_default_pool(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GaussianDataset data = bench_data(d, 1000);
  const std::vector<CComponent> cands = enumerate_candidates(d, CandidateLimits{});
  for (auto _ : state) {
    auto scored = score_candidates(cands, data.covariance, data.n_samples);
    benchmark::DoNotOptimize(scored.data());
  }
  state.counters["candidates"] = static_cast<double>(cands.size());
}

void BM_prune_default_pool(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GaussianDataset data = bench_data(d, 1000);
  const CandidateLimits limits{};
  const std::vector<ScoredCandidate> scored =
      score_candidates(enumerate_candidates(d, limits), data.covariance, data.n_samples);
  for (auto _ : state) {
    auto pool = scored;
    benchmark::DoNotOptimize(prune_candidates(pool, limits));
  }
}

}  // namespace

BENCHMARK(BM_fit_pair_component)->Arg(8)->Arg(14);
BENCHMARK(BM_score_default_pool)->Arg(8)->Arg(12);
BENCHMARK(BM_prune_default_pool)->Arg(8)->Arg(12);
