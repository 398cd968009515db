#pragma once

#include "aglearn/admg.hpp"
#include "aglearn/ricf.hpp"

namespace aglearn::testing {

/// Seven-node ancestral graph with four c-components of all three flavors:
/// a three-node district {1,2,3} with external parents 0 and 4, a two-node
/// district {4,5}, and singletons 0 and 6.
inline Admg multi_district_graph() {
  return Admg(7,
              {{0, 1}, {4, 2}, {3, 5}, {5, 6}, {3, 6}, {4, 6}},
              {{1, 2}, {1, 3}, {4, 5}});
}

/// Five-node DAG whose node 0 acts as the hidden confounder of 1 and 2.
inline Admg confounded_five_node_dag() {
  return Admg(5, {{3, 1}, {0, 1}, {0, 2}, {4, 2}}, {});
}

/// Projection of the DAG above onto nodes {1,2,3,4}, re-indexed to 0..3:
/// 2 -> 0, 3 -> 1, 0 <-> 1.
inline Admg confounded_projection_truth() {
  return Admg(4, {{2, 0}, {3, 1}}, {{0, 1}});
}

/// Four singleton candidates forming the directed 4-cycle 0->3->2->1->0.
inline std::vector<ScoredCandidate> four_cycle_pool() {
  std::vector<ScoredCandidate> pool;
  auto add = [&pool](int node, NodeSet parents, double score) {
    CComponent c;
    c.district = node_bit(node);
    c.parents = {parents};
    pool.push_back({c, score, CandidateStatus::Active});
  };
  add(0, node_bit(1), -1.0);
  add(3, node_bit(0), -1.0);
  add(2, node_bit(3), -1.0);
  add(1, node_bit(2), -1.0);
  return pool;
}

/// Singleton component: parents -> node.
inline CComponent single(int node, NodeSet parents = 0) {
  CComponent c;
  c.district = node_bit(node);
  c.parents = {parents};
  return c;
}

/// Two-node district a <-> b with the given parent sets.
inline CComponent pair_component(int a, int b, NodeSet wa, NodeSet wb) {
  CComponent c;
  if (a > b) {
    std::swap(a, b);
    std::swap(wa, wb);
  }
  c.district = node_bit(a) | node_bit(b);
  c.bidirected = {{a, b}};
  c.parents = {wa, wb};
  return c;
}

}  // namespace aglearn::testing
