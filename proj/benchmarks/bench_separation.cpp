#include <benchmark/benchmark.h>

#include <random>

#include "aglearn/candidates.hpp"
#include "aglearn/separation.hpp"
#include "aglearn/simulate.hpp"

using namespace aglearn;

namespace {

struct FractionalPoint {
  std::vector<ScoredCandidate> pool;
  std::vector<double> z;
};

FractionalPoint fractional_point(int d) {
  const GaussianDataset data = make_dataset(make_instance(d, 2, 1000, 7).samples);
  FractionalPoint out;
  out.pool = score_candidates(enumerate_candidates(d, CandidateLimits{}), data.covariance,
                              data.n_samples);
  out.z.assign(out.pool.size(), 0.0);
  std::mt19937_64 rng(11);
  for (int half = 0; half < 2; ++half) {
    NodeSet covered = 0;
    while (covered != full_set(d)) {
      const std::size_t v =
          std::uniform_int_distribution<std::size_t>(0, out.pool.size() - 1)(rng);
      const NodeSet district = out.pool[v].component.district;
      if ((district & covered) != 0) continue;
      out.z[v] += 0.5;
      covered |= district;
    }
  }
  return out;
}

void BM_cluster_heuristic(benchmark::State& state) {
  const FractionalPoint point = fractional_point(static_cast<int>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto cuts =
        separate_cluster_heuristic(point.z, point.pool, static_cast<int>(state.range(0)), 20,
                                   seed++);
    benchmark::DoNotOptimize(cuts.data());
  }
}

void BM_integral_separation(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::vector<ScoredCandidate> pool;
  for (int i = 0; i < d; ++i) {
    CComponent c;
    c.district = node_bit(i);
    c.parents = {node_bit((i + 1) % d)};
    pool.push_back({c, -1.0, CandidateStatus::Active});
  }
  const std::vector<double> z(pool.size(), 1.0);
  for (auto _ : state) {
    auto cuts = separate_integral(z, pool, d);
    benchmark::DoNotOptimize(cuts.data());
  }
}

}  // namespace

BENCHMARK(BM_cluster_heuristic)->Arg(8)->Arg(12);
BENCHMARK(BM_integral_separation)->Arg(8)->Arg(16);
