#include <doctest.h>

#include <random>

#include "aglearn/candidates.hpp"
#include "aglearn/lp.hpp"
#include "aglearn/simulate.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace aglearn;
namespace tst = aglearn::testing;

namespace {

IpModel random_model(int d, std::uint64_t seed, int cut_rows) {
  const GroundTruthInstance inst = make_instance(d, 1, 200, seed);
  const GaussianDataset data = make_dataset(inst.samples);
  const CandidateLimits limits = CandidateLimits::unrestricted(d);
  IpModel model = build_model(
      score_candidates(enumerate_candidates(d, limits), data.covariance, data.n_samples), d);
  std::mt19937_64 rng(seed ^ 0xabcd);
  while (static_cast<int>(model.cut_rows.size()) < cut_rows) {
    const NodeSet s = std::uniform_int_distribution<NodeSet>(3, full_set(d))(rng);
    if (set_size(s) < 2) continue;
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
      model.add_cut(cluster_cut(s, model.variables));
    } else {
      const std::vector<int> nodes = set_to_vector(s);
      CutRow row = bicluster_cut(s, nodes[0], nodes[1], model.variables);
      if (!row.coeffs.empty()) model.add_cut(std::move(row));
    }
  }
  return model;
}

void check_rows_satisfied(const IpModel& model, const LpSolution& sol) {
  for (int i = 0; i < model.node_count; ++i) {
    double mass = 0.0;
    for (int v : model.vars_by_node[static_cast<std::size_t>(i)])
      mass += sol.values[static_cast<std::size_t>(v)];
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
  }
  for (const CutRow& row : model.cut_rows) CHECK(evaluate_row(row, sol.values) >= -1e-7);
  for (double v : sol.values) {
    CHECK(v >= -1e-9);
    CHECK(v <= 1.0 + 1e-9);
  }
}

}  // namespace

TEST_CASE("a partition-only model with singleton winners solves integrally") {
  std::vector<ScoredCandidate> pool;
  for (int i = 0; i < 3; ++i) {
    pool.push_back({tst::single(i), -10.0, {}});
    pool.push_back({tst::single(i, node_bit((i + 1) % 3)), -1.0, {}});
  }
  IpModel model = build_model(pool, 3);
  SimplexBackend lp;
  const LpSolution sol = lp.solve(model, {});
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-3.0));
  for (std::size_t v = 0; v < pool.size(); ++v)
    CHECK(sol.values[v] == doctest::Approx(v % 2 == 0 ? 0.0 : 1.0).epsilon(1e-9));
}

TEST_CASE("simplex matches the reference solver on random models") {
  SimplexBackend lp;
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 2 + trial % 3;
    IpModel model = random_model(d, 600 + trial, trial % 4);
    const LpSolution sol = lp.solve(model, {});
    REQUIRE(sol.status == LpStatus::Optimal);
    check_rows_satisfied(model, sol);
    const tst::ReferenceLpResult ref = tst::reference_lp_solve(model);
    REQUIRE(ref.feasible);
    CHECK(sol.objective == doctest::Approx(ref.objective).epsilon(1e-6));
  }
}

TEST_CASE("fixings are honored and can make the model infeasible") {
  IpModel model = random_model(3, 913, 1);
  SimplexBackend lp;
  std::vector<VarFix> fixings(model.variables.size(), VarFix{-1});

  // Fix one variable to 1: it must appear at value 1.
  int pick = -1;
  for (std::size_t v = 0; v < model.variables.size(); ++v)
    if (model.variables[v].component == tst::single(0)) pick = static_cast<int>(v);
  REQUIRE(pick >= 0);
  fixings[static_cast<std::size_t>(pick)] = 1;
  const LpSolution sol = lp.solve(model, fixings);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.values[static_cast<std::size_t>(pick)] == doctest::Approx(1.0));
  check_rows_satisfied(model, sol);

  const LpSolution free_sol = lp.solve(model, {});
  CHECK(free_sol.objective >= sol.objective - 1e-9);

  // Fixing every candidate covering node 0 to zero uncovers the node.
  std::vector<VarFix> kill(model.variables.size(), VarFix{-1});
  for (int v : model.vars_by_node[0]) kill[static_cast<std::size_t>(v)] = 0;
  CHECK(lp.solve(model, kill).status == LpStatus::Infeasible);
}

TEST_CASE("LP bound dominates every integral selection under the same fixings") {
  IpModel model = random_model(4, 77, 2);
  SimplexBackend lp;
  std::vector<VarFix> fixings(model.variables.size(), VarFix{-1});
  fixings[5] = 0;
  fixings[17] = 0;
  const LpSolution sol = lp.solve(model, fixings);
  REQUIRE(sol.status == LpStatus::Optimal);

  double best_integral = -1e300;
  tst::for_each_selection(model.variables, 4, [&](const std::vector<int>& picked) {
    for (int v : picked)
      if (fixings[static_cast<std::size_t>(v)] == 0) return;
    std::vector<double> z(model.variables.size(), 0.0);
    double score = 0.0;
    for (int v : picked) {
      z[static_cast<std::size_t>(v)] = 1.0;
      score += model.variables[static_cast<std::size_t>(v)].score;
    }
    for (const CutRow& row : model.cut_rows)
      if (evaluate_row(row, z) < 0) return;
    best_integral = std::max(best_integral, score);
  });
  CHECK(sol.objective >= best_integral - 1e-7);
}
