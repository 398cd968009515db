#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aglearn/nodeset.hpp"

namespace aglearn {

/// Directed mixed graph: directed edges (tail -> head) plus bidirected edges
/// between unordered pairs. Self-loops and duplicate edges of the same kind
/// are rejected; a pair may simultaneously carry i->j, j->i and i<->j, so
/// non-ancestral graphs are representable and can be inspected.
class Admg {
 public:
  explicit Admg(int node_count);
  Admg(int node_count, const std::vector<std::pair<int, int>>& directed,
       const std::vector<std::pair<int, int>>& bidirected);

  int node_count() const { return d_; }

  void add_directed(int tail, int head);
  void add_bidirected(int a, int b);

  bool has_directed(int tail, int head) const;
  bool has_bidirected(int a, int b) const;

  NodeSet parents(int i) const { return parents_[static_cast<std::size_t>(i)]; }
  NodeSet children(int i) const { return children_[static_cast<std::size_t>(i)]; }
  NodeSet spouses(int i) const { return spouses_[static_cast<std::size_t>(i)]; }

  /// Directed edges as (tail, head) pairs, sorted lexicographically.
  std::vector<std::pair<int, int>> directed_edges() const;
  /// Bidirected edges as (a, b) pairs with a < b, sorted.
  std::vector<std::pair<int, int>> bidirected_edges() const;

  int directed_edge_count() const { return n_directed_; }
  int bidirected_edge_count() const { return n_bidirected_; }
  int edge_count() const { return n_directed_ + n_bidirected_; }

  bool operator==(const Admg& other) const;

 private:
  void check_node(int i) const;

  int d_ = 0;
  int n_directed_ = 0;
  int n_bidirected_ = 0;
  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
  std::vector<NodeSet> spouses_;
};

/// Subgraph implied by one district: the district itself, its internal
/// bidirected edges, and the parent set of every district node. District
/// nodes are kept in ascending order and `parents[k]` belongs to the k-th
/// district node. Components extracted from arbitrary graphs may have parents
/// inside the district (a directed edge between two bidirected-connected
/// nodes); enumerated solver candidates never do — see is_candidate_form.
struct CComponent {
  NodeSet district = 0;
  std::vector<std::pair<int, int>> bidirected;  // pairs within district, a < b
  std::vector<NodeSet> parents;                 // aligned with district order

  std::vector<int> district_nodes() const { return set_to_vector(district); }
  int district_size() const { return set_size(district); }
  NodeSet parent_set_of(int node) const;
  NodeSet parent_union() const;
  int directed_edge_count() const;
  int index_of(int node) const;  // position of node within the district

  /// True when every parent set is disjoint from the district, the shape all
  /// enumerated candidates have.
  bool is_candidate_form() const;

  /// Canonical byte string identifying the component; equal components map to
  /// equal keys. Used for candidate pools and caches.
  std::string canonical_key() const;

  bool operator==(const CComponent& other) const {
    return district == other.district && bidirected == other.bidirected &&
           parents == other.parents;
  }

  /// Throws std::invalid_argument if the structural invariants are violated
  /// (district empty, self-parents, bidirected edges outside the district or
  /// not connecting it).
  void validate(int node_count) const;
};

struct DistrictPartition {
  std::vector<NodeSet> blocks;  // disjoint, union = V, sorted by lowest node
};

/// Connected components of the bidirected part; singleton blocks for nodes
/// with no bidirected edge.
DistrictPartition districts(const Admg& g);

/// The c-component implied by `district`, which must be a block of
/// districts(g). Throws std::invalid_argument otherwise.
CComponent implied_subgraph(const Admg& g, NodeSet district);

/// All c-components of g, ordered by lowest district node.
std::vector<CComponent> all_c_components(const Admg& g);

/// Union of the selected c-components as a graph on d nodes. The districts
/// must partition {0..d-1}; throws std::invalid_argument otherwise.
/// Round-trip: all_c_components(assemble(S, d)) == S up to ordering.
Admg assemble(const std::vector<CComponent>& selected, int d);

/// Nodes reachable from `source` along directed edges (excluding source
/// itself unless it lies on a cycle through itself, which cannot happen
/// without self-loops).
NodeSet descendants(const Admg& g, int source);

/// Some directed cycle as a node sequence v0 -> v1 -> ... -> vk -> v0, or
/// nullopt if g has none.
std::optional<std::vector<int>> find_directed_cycle(const Admg& g);

struct AlmostDirectedCycle {
  std::vector<int> path;          // directed path a -> ... -> b
  std::pair<int, int> bidirected;  // the edge {a, b}, a < b
};

/// A directed path a => b together with bidirected edge {a, b}, if any exists.
std::optional<AlmostDirectedCycle> find_almost_directed_cycle(const Admg& g);

/// True iff g has neither directed nor almost directed cycles.
bool is_ancestral(const Admg& g);

/// True when some directed edge connects two nodes of the same district.
/// Such graphs fall outside the candidate pools the solver searches over.
bool has_directed_edge_within_district(const Admg& g);

}  // namespace aglearn
