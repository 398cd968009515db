#include <doctest.h>

#include <random>

#include "aglearn/candidates.hpp"
#include "aglearn/separation.hpp"
#include "aglearn/simulate.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace aglearn;
namespace tst = aglearn::testing;

namespace {

// Pool spanning a graph's own components plus the empty fallbacks; z selects
// the graph.
std::pair<std::vector<ScoredCandidate>, std::vector<double>> point_for(const Admg& g) {
  std::vector<ScoredCandidate> pool;
  for (const CComponent& c : all_c_components(g)) pool.push_back({c, -1.0, {}});
  for (int i = 0; i < g.node_count(); ++i) {
    bool lone_present = false;
    for (const ScoredCandidate& sc : pool)
      if (sc.component == tst::single(i)) lone_present = true;
    if (!lone_present) pool.push_back({tst::single(i), -1.0, {}});
  }
  std::vector<double> z(pool.size(), 0.0);
  for (const CComponent& c : all_c_components(g))
    for (std::size_t v = 0; v < pool.size(); ++v)
      if (pool[v].component == c) z[v] = 1.0;
  return {pool, z};
}

}  // namespace

TEST_CASE("integral separation cuts off a directed cycle") {
  const std::vector<ScoredCandidate> pool = tst::four_cycle_pool();
  const std::vector<double> z(4, 1.0);
  const std::vector<CutRow> cuts = separate_integral(z, pool, 4);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].kind == CutKind::Cluster);
  CHECK(cuts[0].subset == full_set(4));
  CHECK(evaluate_row(cuts[0], z) < 0);
}

TEST_CASE("integral separation cuts off an almost directed cycle") {
  // 2 -> 0 -> 1 with 1 <-> 2 selected via a two-node-district candidate.
  std::vector<ScoredCandidate> pool{{tst::single(0, node_bit(2)), -1, {}},
                                    {tst::pair_component(1, 2, node_bit(0), 0), -1, {}}};
  const std::vector<double> z(2, 1.0);
  const std::vector<CutRow> cuts = separate_integral(z, pool, 3);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].kind == CutKind::Bicluster);
  CHECK(cuts[0].i == 1);
  CHECK(cuts[0].j == 2);
  CHECK(evaluate_row(cuts[0], z) < 0);
}

TEST_CASE("integral separation is empty exactly on ancestral selections") {
  std::mt19937_64 rng(43);
  int non_ancestral_seen = 0;
  for (int trial = 0; trial < 800; ++trial) {
    // Random integral point: one candidate per node from a tiny random pool.
    const int d = 5;
    std::vector<ScoredCandidate> pool;
    for (int i = 0; i < d; ++i) {
      NodeSet w = std::uniform_int_distribution<NodeSet>(0, full_set(d))(rng);
      w = without_node(w, i);
      pool.push_back({tst::single(i, w), -1.0, {}});
    }
    // Sometimes replace two singletons by a bidirected pair.
    if (trial % 2 == 0) {
      const int a = std::uniform_int_distribution<int>(0, d - 2)(rng);
      const int b = std::uniform_int_distribution<int>(a + 1, d - 1)(rng);
      NodeSet wa = pool[static_cast<std::size_t>(a)].component.parents[0] & ~node_bit(b);
      NodeSet wb = pool[static_cast<std::size_t>(b)].component.parents[0] & ~node_bit(a);
      pool.erase(pool.begin() + b);
      pool.erase(pool.begin() + a);
      pool.push_back({tst::pair_component(a, b, wa, wb), -1.0, {}});
    }
    std::vector<double> z(pool.size(), 1.0);
    std::vector<CComponent> comps;
    for (const ScoredCandidate& sc : pool) comps.push_back(sc.component);
    const Admg g = assemble(comps, d);
    const std::vector<CutRow> cuts = separate_integral(z, pool, d);
    CHECK(cuts.empty() == is_ancestral(g));
    if (!cuts.empty()) ++non_ancestral_seen;
    for (const CutRow& row : cuts) CHECK(evaluate_row(row, z) < 0);
  }
  CHECK(non_ancestral_seen > 300);
}

TEST_CASE("initial weights satisfy the merge relation at integral ancestral points") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const Admg g = tst::random_ancestral_graph(6, rng);
    if (has_directed_edge_within_district(g)) continue;
    const auto [pool, z] = point_for(g);
    const ContractionState st = initial_weights(z, pool, g.node_count());
    for (int a = 0; a < g.node_count(); ++a)
      for (int b = a + 1; b < g.node_count(); ++b) {
        CHECK(st.mu(a) == doctest::Approx(1.0));
        const double merged = st.direct_mu(node_bit(a) | node_bit(b));
        CHECK(merged == doctest::Approx(2.0 - st.weight(a, b)).epsilon(1e-9));
      }
  }
}

TEST_CASE("a mutual-parent pair yields weight two and an immediate cut") {
  std::vector<ScoredCandidate> pool{{tst::single(0, node_bit(1)), -1, {}},
                                    {tst::single(1, node_bit(0)), -1, {}},
                                    {tst::single(0), -1, {}},
                                    {tst::single(1), -1, {}}};
  const std::vector<double> z{1.0, 1.0, 0.0, 0.0};
  ContractionState st = initial_weights(z, pool, 2);
  CHECK(st.weight(0, 1) == doctest::Approx(2.0));
  st.contract(0, 1);
  CHECK(st.mu(0) == doctest::Approx(0.0));
  CHECK(st.direct_mu(node_bit(0)) == doctest::Approx(0.0));

  const std::vector<CutRow> cuts = separate_cluster_heuristic(z, pool, 2, 1, 17);
  REQUIRE(cuts.size() == 1);
  CHECK(evaluate_row(cuts[0], z) == doctest::Approx(-1.0));
}

TEST_CASE("weight relation is preserved across contractions") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 6;
    const GroundTruthInstance inst = make_instance(d, 1, 150, 8100 + trial);
    const GaussianDataset data = make_dataset(inst.samples);
    CandidateLimits limits{2, 2, 1, 10'000'000};
    const auto pool =
        score_candidates(enumerate_candidates(d, limits), data.covariance, data.n_samples);
    // Fractional point: equal mass over each node's first few candidates.
    std::vector<double> z(pool.size(), 0.0);
    std::vector<int> per_node(static_cast<std::size_t>(d), 0);
    for (std::size_t v = 0; v < pool.size(); ++v) {
      const CComponent& c = pool[v].component;
      if (c.district_size() != 1) continue;
      const int node = lowest_node(c.district);
      if (per_node[static_cast<std::size_t>(node)] < 2) {
        z[v] = 0.5;
        ++per_node[static_cast<std::size_t>(node)];
      }
    }
    ContractionState st = ContractionState::make_cluster(z, pool, d);
    for (int step = 0; step < 3; ++step) {
      const std::vector<int> labels = set_to_vector(st.alive());
      // pick the heaviest pair
      int pa = -1, pb = -1;
      double best = 0.0;
      for (std::size_t x = 0; x < labels.size(); ++x)
        for (std::size_t y = x + 1; y < labels.size(); ++y)
          if (st.weight(labels[x], labels[y]) > best) {
            best = st.weight(labels[x], labels[y]);
            pa = labels[x];
            pb = labels[y];
          }
      if (pa < 0) break;
      const double predicted = st.mu(pa) + st.mu(pb) - st.weight(pa, pb);
      const double direct_merge = st.direct_mu(node_bit(pa) | node_bit(pb));
      CHECK(predicted == doctest::Approx(direct_merge).epsilon(1e-9));
      st.contract(pa, pb);
      CHECK(st.mu(std::min(pa, pb)) == doctest::Approx(predicted).epsilon(1e-9));
      // Lone-node districts drop exactly when their mass dies, so the stored
      // value keeps matching the live recomputation.
      CHECK(st.mu(std::min(pa, pb)) ==
            doctest::Approx(st.direct_mu(node_bit(std::min(pa, pb)))).epsilon(1e-9));
    }
  }
}

TEST_CASE("ancestral integral points produce no heuristic cuts") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const Admg g = tst::random_ancestral_graph(6, rng);
    if (has_directed_edge_within_district(g)) continue;
    const auto [pool, z] = point_for(g);
    CHECK(separate_cluster_heuristic(z, pool, g.node_count(), 20, trial).empty());
  }
}

TEST_CASE("the balanced three-cycle point admits no violated cluster inequality") {
  // z = 1/2 on {1}->0, {2}->1, {0}->2 and 1/2 on each lone node.
  std::vector<ScoredCandidate> pool{
      {tst::single(0, node_bit(1)), -1, {}}, {tst::single(1, node_bit(2)), -1, {}},
      {tst::single(2, node_bit(0)), -1, {}}, {tst::single(0), -1, {}},
      {tst::single(1), -1, {}},              {tst::single(2), -1, {}}};
  const std::vector<double> z{0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  for (NodeSet s = 0; s <= full_set(3); ++s)
    if (set_size(s) >= 2) CHECK(tst::direct_mu(z, pool, s) >= 1.0);
  CHECK(tst::direct_mu(z, pool, full_set(3)) == doctest::Approx(1.5));
  CHECK(separate_cluster_heuristic(z, pool, 3, 20, 23).empty());
}

TEST_CASE("bicluster heuristic separates an almost-cycle point") {
  // 2 -> 0 -> 1 with 1 <-> 2 (integral point, run through the heuristic).
  std::vector<ScoredCandidate> pool{{tst::single(0, node_bit(2)), -1, {}},
                                    {tst::pair_component(1, 2, node_bit(0), 0), -1, {}},
                                    {tst::single(0), -1, {}},
                                    {tst::single(1), -1, {}},
                                    {tst::single(2), -1, {}}};
  const std::vector<double> z{1.0, 1.0, 0.0, 0.0, 0.0};
  CHECK(bidirected_mass(z, pool, 1, 2) == doctest::Approx(1.0));
  const std::vector<CutRow> cuts = separate_bicluster_heuristic(z, pool, 3, {1, 2}, 20, 5);
  REQUIRE(!cuts.empty());
  for (const CutRow& row : cuts) CHECK(evaluate_row(row, z) < 0);
}

TEST_CASE("bicluster heuristic requires mass on the pair and respects satisfied rows") {
  std::vector<ScoredCandidate> pool{{tst::pair_component(0, 1, node_bit(2), node_bit(2)), -1, {}},
                                    {tst::single(2), -1, {}},
                                    {tst::single(0), -1, {}},
                                    {tst::single(1), -1, {}}};
  const std::vector<double> z{1.0, 1.0, 0.0, 0.0};
  CHECK_THROWS(separate_bicluster_heuristic(z, pool, 3, {0, 2}, 10, 1));
  // Parents of the pair sit outside every inner set; no violation exists.
  const std::vector<CutRow> cuts = separate_bicluster_heuristic(z, pool, 3, {0, 1}, 20, 3);
  CHECK(cuts.empty());
}

TEST_CASE("heuristic cuts at random fractional points are always genuinely violated") {
  std::mt19937_64 rng(71);
  int emitted = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 5;
    const GroundTruthInstance inst = make_instance(d, 1, 120, 8800 + trial);
    const GaussianDataset data = make_dataset(inst.samples);
    CandidateLimits limits{2, 2, 1, 10'000'000};
    const auto pool =
        score_candidates(enumerate_candidates(d, limits), data.covariance, data.n_samples);

    // Random fractional point satisfying the partition rows: mix two random
    // selections with weight 1/2.
    std::vector<double> z(pool.size(), 0.0);
    for (int half = 0; half < 2; ++half) {
      NodeSet covered = 0;
      while (covered != full_set(d)) {
        const std::size_t v = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
        const NodeSet district = pool[v].component.district;
        if ((district & covered) != 0) continue;
        z[v] += 0.5;
        covered |= district;
      }
    }
    for (const CutRow& row : separate_cluster_heuristic(z, pool, d, 20, trial)) {
      CHECK(evaluate_row(row, z) < 0);
      ++emitted;
    }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        if (bidirected_mass(z, pool, i, j) <= 0) continue;
        for (const CutRow& row :
             separate_bicluster_heuristic(z, pool, d, {i, j}, 10, trial * 31 + i * 7 + j)) {
          CHECK(evaluate_row(row, z) < 0);
          ++emitted;
        }
      }
  }
  CHECK(emitted > 10);
}

TEST_CASE("separation is deterministic for a fixed seed") {
  std::vector<ScoredCandidate> pool{{tst::single(0, node_bit(1)), -1, {}},
                                    {tst::single(1, node_bit(0)), -1, {}},
                                    {tst::single(0), -1, {}},
                                    {tst::single(1), -1, {}}};
  const std::vector<double> z{0.75, 0.75, 0.25, 0.25};
  const auto a = separate_cluster_heuristic(z, pool, 2, 20, 99);
  const auto b = separate_cluster_heuristic(z, pool, 2, 20, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].signature() == b[k].signature());
}
