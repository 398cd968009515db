#include "aglearn/admg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace aglearn {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

Admg::Admg(int node_count) : d_(node_count) {
  if (node_count < 0 || node_count > kMaxNodes)
    fail("node count must be in [0, " + std::to_string(kMaxNodes) + "]");
  parents_.assign(static_cast<std::size_t>(d_), 0);
  children_.assign(static_cast<std::size_t>(d_), 0);
  spouses_.assign(static_cast<std::size_t>(d_), 0);
}

Admg::Admg(int node_count, const std::vector<std::pair<int, int>>& directed,
           const std::vector<std::pair<int, int>>& bidirected)
    : Admg(node_count) {
  for (auto [tail, head] : directed) add_directed(tail, head);
  for (auto [a, b] : bidirected) add_bidirected(a, b);
}

void Admg::check_node(int i) const {
  if (i < 0 || i >= d_) fail("node index " + std::to_string(i) + " out of range");
}

void Admg::add_directed(int tail, int head) {
  check_node(tail);
  check_node(head);
  if (tail == head) fail("self-loop rejected");
  if (has_directed(tail, head)) fail("duplicate directed edge");
  parents_[static_cast<std::size_t>(head)] = with_node(parents(head), tail);
  children_[static_cast<std::size_t>(tail)] = with_node(children(tail), head);
  ++n_directed_;
}

void Admg::add_bidirected(int a, int b) {
  check_node(a);
  check_node(b);
  if (a == b) fail("self-loop rejected");
  if (has_bidirected(a, b)) fail("duplicate bidirected edge");
  spouses_[static_cast<std::size_t>(a)] = with_node(spouses(a), b);
  spouses_[static_cast<std::size_t>(b)] = with_node(spouses(b), a);
  ++n_bidirected_;
}

bool Admg::has_directed(int tail, int head) const {
  check_node(tail);
  check_node(head);
  return contains(parents(head), tail);
}

bool Admg::has_bidirected(int a, int b) const {
  check_node(a);
  check_node(b);
  return contains(spouses(a), b);
}

std::vector<std::pair<int, int>> Admg::directed_edges() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n_directed_));
  for (int tail = 0; tail < d_; ++tail)
    for_each_node(children(tail), [&](int head) { edges.emplace_back(tail, head); });
  return edges;
}

std::vector<std::pair<int, int>> Admg::bidirected_edges() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n_bidirected_));
  for (int a = 0; a < d_; ++a)
    for_each_node(spouses(a), [&](int b) {
      if (a < b) edges.emplace_back(a, b);
    });
  return edges;
}

bool Admg::operator==(const Admg& other) const {
  return d_ == other.d_ && parents_ == other.parents_ && spouses_ == other.spouses_;
}

NodeSet CComponent::parent_set_of(int node) const {
  return parents[static_cast<std::size_t>(index_of(node))];
}

int CComponent::index_of(int node) const {
  if (!contains(district, node)) fail("node not in district");
  return set_size(district & (node_bit(node) - 1));
}

NodeSet CComponent::parent_union() const {
  NodeSet u = 0;
  for (NodeSet w : parents) u |= w;
  return u;
}

int CComponent::directed_edge_count() const {
  int n = 0;
  for (NodeSet w : parents) n += set_size(w);
  return n;
}

std::string CComponent::canonical_key() const {
  std::string key;
  key.reserve(8 + 4 * bidirected.size() + 8 * parents.size());
  auto put64 = [&key](std::uint64_t v) {
    for (int s = 0; s < 64; s += 8) key.push_back(static_cast<char>((v >> s) & 0xff));
  };
  put64(district);
  key.push_back(static_cast<char>(bidirected.size()));
  for (auto [a, b] : bidirected) {
    key.push_back(static_cast<char>(a));
    key.push_back(static_cast<char>(b));
  }
  for (NodeSet w : parents) put64(w);
  return key;
}

bool CComponent::is_candidate_form() const {
  for (NodeSet w : parents)
    if ((w & district) != 0) return false;
  return true;
}

void CComponent::validate(int node_count) const {
  if (district == 0) fail("empty district");
  if (node_count < kMaxNodes && (district & ~full_set(node_count)) != 0)
    fail("district node out of range");
  if (parents.size() != static_cast<std::size_t>(district_size()))
    fail("parent list size does not match district size");
  const std::vector<int> dnodes_check = district_nodes();
  for (std::size_t k = 0; k < parents.size(); ++k) {
    if (contains(parents[k], dnodes_check[k])) fail("node listed as its own parent");
    if (node_count < kMaxNodes && (parents[k] & ~full_set(node_count)) != 0)
      fail("parent node out of range");
  }
  if (district_size() == 1) {
    if (!bidirected.empty()) fail("singleton district with bidirected edges");
    return;
  }
  // Bidirected edges must lie within the district and connect it.
  std::vector<int> nodes = district_nodes();
  std::vector<NodeSet> adj(nodes.size(), 0);
  for (auto [a, b] : bidirected) {
    if (a >= b) fail("bidirected pair not ordered");
    if (!contains(district, a) || !contains(district, b))
      fail("bidirected edge leaves the district");
    adj[static_cast<std::size_t>(index_of(a))] |= node_bit(b);
    adj[static_cast<std::size_t>(index_of(b))] |= node_bit(a);
  }
  NodeSet seen = node_bit(nodes[0]);
  std::vector<int> stack{nodes[0]};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for_each_node(adj[static_cast<std::size_t>(index_of(u))] & ~seen, [&](int v) {
      seen = with_node(seen, v);
      stack.push_back(v);
    });
  }
  if (seen != district) fail("bidirected edges do not connect the district");
}

DistrictPartition districts(const Admg& g) {
  const int d = g.node_count();
  DistrictPartition out;
  NodeSet assigned = 0;
  for (int start = 0; start < d; ++start) {
    if (contains(assigned, start)) continue;
    NodeSet block = node_bit(start);
    std::vector<int> stack{start};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for_each_node(g.spouses(u) & ~block, [&](int v) {
        block = with_node(block, v);
        stack.push_back(v);
      });
    }
    assigned |= block;
    out.blocks.push_back(block);
  }
  return out;
}

CComponent implied_subgraph(const Admg& g, NodeSet district) {
  const DistrictPartition part = districts(g);
  if (std::find(part.blocks.begin(), part.blocks.end(), district) == part.blocks.end())
    fail("node set is not a district of the graph");
  CComponent c;
  c.district = district;
  for_each_node(district, [&](int i) {
    c.parents.push_back(g.parents(i));
    for_each_node(g.spouses(i) & district, [&](int j) {
      if (i < j) c.bidirected.emplace_back(i, j);
    });
  });
  std::sort(c.bidirected.begin(), c.bidirected.end());
  return c;
}

std::vector<CComponent> all_c_components(const Admg& g) {
  std::vector<CComponent> out;
  for (NodeSet block : districts(g).blocks) out.push_back(implied_subgraph(g, block));
  return out;
}

Admg assemble(const std::vector<CComponent>& selected, int d) {
  NodeSet covered = 0;
  for (const CComponent& c : selected) {
    c.validate(d);
    if ((covered & c.district) != 0) fail("districts of selected components overlap");
    covered |= c.district;
  }
  if (covered != full_set(d)) fail("districts of selected components do not cover all nodes");
  Admg g(d);
  for (const CComponent& c : selected) {
    for (auto [a, b] : c.bidirected) g.add_bidirected(a, b);
    const std::vector<int> nodes = c.district_nodes();
    for (std::size_t k = 0; k < nodes.size(); ++k)
      for_each_node(c.parents[k], [&](int p) { g.add_directed(p, nodes[k]); });
  }
  return g;
}

NodeSet descendants(const Admg& g, int source) {
  NodeSet seen = 0;  // source itself only appears if it lies on a directed cycle
  std::vector<int> stack{source};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for_each_node(g.children(u) & ~seen, [&](int v) {
      seen = with_node(seen, v);
      stack.push_back(v);
    });
  }
  return seen;
}

std::optional<std::vector<int>> find_directed_cycle(const Admg& g) {
  const int d = g.node_count();
  // Iterative DFS with colors; on a back edge the stack slice is the cycle.
  std::vector<int> color(static_cast<std::size_t>(d), 0);  // 0 white, 1 on stack, 2 done
  std::vector<int> path;
  struct Frame {
    int node;
    NodeSet remaining;
  };
  for (int root = 0; root < d; ++root) {
    if (color[static_cast<std::size_t>(root)] != 0) continue;
    std::vector<Frame> frames{{root, g.children(root)}};
    color[static_cast<std::size_t>(root)] = 1;
    path.push_back(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.remaining == 0) {
        color[static_cast<std::size_t>(f.node)] = 2;
        path.pop_back();
        frames.pop_back();
        continue;
      }
      const int v = lowest_node(f.remaining);
      f.remaining = without_node(f.remaining, v);
      if (color[static_cast<std::size_t>(v)] == 1) {
        auto it = std::find(path.begin(), path.end(), v);
        return std::vector<int>(it, path.end());
      }
      if (color[static_cast<std::size_t>(v)] == 0) {
        color[static_cast<std::size_t>(v)] = 1;
        path.push_back(v);
        frames.push_back({v, g.children(v)});
      }
    }
  }
  return std::nullopt;
}

namespace {

// Shortest directed path from a to b, or empty if none.
std::vector<int> directed_path(const Admg& g, int a, int b) {
  const int d = g.node_count();
  std::vector<int> prev(static_cast<std::size_t>(d), -1);
  NodeSet seen = node_bit(a);
  std::vector<int> queue{a};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int u = queue[qi];
    bool found = false;
    for_each_node(g.children(u) & ~seen, [&](int v) {
      seen = with_node(seen, v);
      prev[static_cast<std::size_t>(v)] = u;
      queue.push_back(v);
      if (v == b) found = true;
    });
    if (found) break;
  }
  if (!contains(seen, b) || a == b) return {};
  std::vector<int> path;
  for (int v = b; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::optional<AlmostDirectedCycle> find_almost_directed_cycle(const Admg& g) {
  for (auto [a, b] : g.bidirected_edges()) {
    if (std::vector<int> p = directed_path(g, a, b); !p.empty())
      return AlmostDirectedCycle{std::move(p), {a, b}};
    if (std::vector<int> p = directed_path(g, b, a); !p.empty())
      return AlmostDirectedCycle{std::move(p), {a, b}};
  }
  return std::nullopt;
}

bool is_ancestral(const Admg& g) {
  return !find_directed_cycle(g).has_value() && !find_almost_directed_cycle(g).has_value();
}

bool has_directed_edge_within_district(const Admg& g) {
  for (NodeSet block : districts(g).blocks) {
    bool found = false;
    for_each_node(block, [&](int i) {
      if ((g.parents(i) & block) != 0) found = true;
    });
    if (found) return true;
  }
  return false;
}

}  // namespace aglearn
