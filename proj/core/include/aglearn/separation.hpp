#pragma once

#include <cstdint>
#include <vector>

#include "aglearn/ip_model.hpp"

namespace aglearn {

/// Exact separation at an integral point: assembles the selected graph and
/// turns a directed cycle into a cluster cut and an almost directed cycle
/// into a bicluster cut. Returns an empty list iff the graph is ancestral.
std::vector<CutRow> separate_integral(const std::vector<double>& z,
                                      const std::vector<ScoredCandidate>& vars, int d);

/// State of the random-contraction search. Pseudonodes are labeled by the
/// smallest original node they contain; mu tracks the cluster-inequality mass
/// of each pseudonode and satisfies mu(merge) = mu(a) + mu(b) - w(a, b) at
/// every contraction.
class ContractionState {
 public:
  struct LiveVar {
    int var = -1;
    double z = 0.0;
    NodeSet district = 0;                          // current labels
    std::vector<std::pair<int, NodeSet>> parents;  // (district label, parent labels)
  };

  static ContractionState make_cluster(const std::vector<double>& z,
                                       const std::vector<ScoredCandidate>& vars, int d);
  /// Bicluster variant: i and j start merged, variables whose district meets
  /// {i, j} in exactly one node are dropped, and the parent sets of i and j
  /// are pooled.
  static ContractionState make_bicluster(const std::vector<double>& z,
                                         const std::vector<ScoredCandidate>& vars, int d,
                                         int i, int j);

  NodeSet alive() const { return alive_; }
  int pseudonode_count() const { return set_size(alive_); }
  NodeSet underlying(int label) const { return underlying_[static_cast<std::size_t>(label)]; }
  double mu(int label) const { return mu_[static_cast<std::size_t>(label)]; }
  double weight(int a, int b) const;
  const std::vector<LiveVar>& live_vars() const { return live_; }

  /// Cluster mass of an arbitrary label set, recomputed from the live
  /// variables (each variable counts once).
  double direct_mu(NodeSet labels) const;

  /// Merges b into a (requires a < b, both alive): updates mu via the weight
  /// relation, drops variables where one side of the pair parents the other,
  /// relabels survivors and recomputes weights. Returns the merged label.
  int contract(int a, int b);

 private:
  void recompute_weights();

  int d_ = 0;
  NodeSet alive_ = 0;
  std::vector<NodeSet> underlying_;
  std::vector<double> mu_;
  std::vector<LiveVar> live_;
  std::vector<double> weights_;  // dense d x d, symmetric
};

/// Cluster-heuristic entry state; throws std::invalid_argument when z does
/// not satisfy the partition rows.
ContractionState initial_weights(const std::vector<double>& z,
                                 const std::vector<ScoredCandidate>& vars, int d);

/// Random-contraction search for violated cluster inequalities. Every
/// returned row is verified violated at z; an empty result is a heuristic
/// failure, not a certificate.
std::vector<CutRow> separate_cluster_heuristic(const std::vector<double>& z,
                                               const std::vector<ScoredCandidate>& vars, int d,
                                               int restarts, std::uint64_t seed);

/// Same scheme for bicluster inequalities on the pair (i, j); requires the
/// indicator mass of i<->j at z to be positive. Cluster cuts discovered on
/// the way (a non-pair pseudonode dropping below 1) are emitted as well.
std::vector<CutRow> separate_bicluster_heuristic(const std::vector<double>& z,
                                                 const std::vector<ScoredCandidate>& vars, int d,
                                                 std::pair<int, int> pair, int restarts,
                                                 std::uint64_t seed);

/// Indicator mass of the bidirected pair at z.
double bidirected_mass(const std::vector<double>& z, const std::vector<ScoredCandidate>& vars,
                       int i, int j);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose, std::uint64_t index);

}  // namespace aglearn
