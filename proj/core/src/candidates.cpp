#include "aglearn/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace aglearn {

namespace {

// Enumerates subsets of `items` of each size 0..max_size, lexicographically
// within each size. fn receives the subset as a NodeSet.
template <typename Fn>
void for_each_bounded_subset(const std::vector<int>& items, int max_size, Fn&& fn) {
  const int n = static_cast<int>(items.size());
  max_size = std::min(max_size, n);
  std::vector<int> pick;
  for (int size = 0; size <= max_size; ++size) {
    pick.assign(static_cast<std::size_t>(size), 0);
    for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
      NodeSet s = 0;
      for (int idx : pick) s |= node_bit(items[static_cast<std::size_t>(idx)]);
      fn(s);
      if (size == 0) break;
      int j = size - 1;
      while (j >= 0 && pick[static_cast<std::size_t>(j)] == n - size + j) --j;
      if (j < 0) break;
      ++pick[static_cast<std::size_t>(j)];
      for (int j2 = j + 1; j2 < size; ++j2)
        pick[static_cast<std::size_t>(j2)] = pick[static_cast<std::size_t>(j2 - 1)] + 1;
    }
  }
}

template <typename Fn>
void for_each_combination(int n, int size, Fn&& fn) {
  std::vector<int> pick(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(pick);
    int j = size - 1;
    while (j >= 0 && pick[static_cast<std::size_t>(j)] == n - size + j) --j;
    if (j < 0) break;
    ++pick[static_cast<std::size_t>(j)];
    for (int j2 = j + 1; j2 < size; ++j2)
      pick[static_cast<std::size_t>(j2)] = pick[static_cast<std::size_t>(j2 - 1)] + 1;
  }
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

double subset_count(int n, int max_size) {
  double total = 0.0;
  for (int s = 0; s <= std::min(n, max_size); ++s) total += binom(n, s);
  return total;
}

// Number of connected labeled graphs on n nodes.
double connected_graph_count(int n) {
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  auto total_graphs = [](int m) { return std::pow(2.0, 0.5 * m * (m - 1)); };
  for (int m = 1; m <= n; ++m) {
    double v = total_graphs(m);
    for (int k = 1; k < m; ++k)
      v -= binom(m - 1, k - 1) * c[static_cast<std::size_t>(k)] * total_graphs(m - k);
    c[static_cast<std::size_t>(m)] = v;
  }
  return c[static_cast<std::size_t>(n)];
}

bool pattern_connects(std::uint64_t mask, const std::vector<std::pair<int, int>>& pairs, int p) {
  // Union-find over p local slots.
  std::vector<int> root(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) root[static_cast<std::size_t>(i)] = i;
  auto find = [&](int x) {
    while (root[static_cast<std::size_t>(x)] != x) x = root[static_cast<std::size_t>(x)];
    return x;
  };
  int components = p;
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    if (!((mask >> e) & 1)) continue;
    const int ra = find(pairs[e].first);
    const int rb = find(pairs[e].second);
    if (ra != rb) {
      root[static_cast<std::size_t>(ra)] = rb;
      --components;
    }
  }
  return components == 1;
}

std::vector<std::pair<int, int>> local_pairs(int p) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b) pairs.emplace_back(a, b);
  return pairs;
}

}  // namespace

std::uint64_t count_candidates(int d, const CandidateLimits& limits) {
  double total = static_cast<double>(d) * subset_count(d - 1, limits.max_parents_single);
  for (int p = 2; p <= std::min(limits.max_district, d); ++p) {
    const double per_node = subset_count(d - p, limits.max_parents_per_district_node);
    total += binom(d, p) * connected_graph_count(p) * std::pow(per_node, p);
  }
  if (total > 1e18) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::llround(total));
}

bool within_limits(const CComponent& c, const CandidateLimits& limits) {
  if (c.district_size() == 1)
    return set_size(c.parents.front()) <= limits.max_parents_single;
  if (c.district_size() > limits.max_district) return false;
  for (NodeSet w : c.parents)
    if (set_size(w) > limits.max_parents_per_district_node) return false;
  return true;
}

std::vector<CComponent> enumerate_candidates(int d, const CandidateLimits& limits) {
  if (d < 1 || d > kMaxNodes) throw std::invalid_argument("node count out of range");
  if (limits.max_parents_single < 0 || limits.max_district < 1)
    throw std::invalid_argument("invalid candidate limits");
  const std::uint64_t count = count_candidates(d, limits);
  if (count > limits.variable_cap)
    throw std::invalid_argument("candidate limits would produce " + std::to_string(count) +
                                " variables, above the cap of " +
                                std::to_string(limits.variable_cap));

  std::vector<CComponent> out;
  out.reserve(count);

  for (int i = 0; i < d; ++i) {
    std::vector<int> others;
    for (int j = 0; j < d; ++j)
      if (j != i) others.push_back(j);
    for_each_bounded_subset(others, limits.max_parents_single, [&](NodeSet w) {
      CComponent c;
      c.district = node_bit(i);
      c.parents = {w};
      out.push_back(std::move(c));
    });
  }

  for (int p = 2; p <= std::min(limits.max_district, d); ++p) {
    const std::vector<std::pair<int, int>> pairs = local_pairs(p);
    std::vector<std::uint64_t> patterns;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pairs.size()); ++mask)
      if (pattern_connects(mask, pairs, p)) patterns.push_back(mask);

    for_each_combination(d, p, [&](const std::vector<int>& nodes) {
      std::vector<int> others;
      for (int j = 0; j < d; ++j)
        if (std::find(nodes.begin(), nodes.end(), j) == nodes.end()) others.push_back(j);

      // All parent-set choices per district node, shared across patterns.
      std::vector<NodeSet> parent_choices;
      for_each_bounded_subset(others, limits.max_parents_per_district_node,
                              [&](NodeSet w) { parent_choices.push_back(w); });

      for (std::uint64_t pattern : patterns) {
        std::vector<std::pair<int, int>> bidirected;
        for (std::size_t e = 0; e < pairs.size(); ++e)
          if ((pattern >> e) & 1)
            bidirected.emplace_back(nodes[static_cast<std::size_t>(pairs[e].first)],
                                    nodes[static_cast<std::size_t>(pairs[e].second)]);
        // Odometer over parent choices for each district node.
        std::vector<std::size_t> idx(static_cast<std::size_t>(p), 0);
        while (true) {
          CComponent c;
          c.district = set_from_vector(nodes);
          c.bidirected = bidirected;
          for (int k = 0; k < p; ++k) c.parents.push_back(parent_choices[idx[static_cast<std::size_t>(k)]]);
          out.push_back(std::move(c));
          int k = p - 1;
          while (k >= 0 && idx[static_cast<std::size_t>(k)] + 1 == parent_choices.size()) {
            idx[static_cast<std::size_t>(k)] = 0;
            --k;
          }
          if (k < 0) break;
          ++idx[static_cast<std::size_t>(k)];
        }
      }
    });
  }
  return out;
}

std::vector<ScoredCandidate> score_candidates(const std::vector<CComponent>& cands,
                                              const Eigen::MatrixXd& q, int n) {
  std::vector<ScoredCandidate> out;
  out.reserve(cands.size());
  for (const CComponent& c : cands)
    out.push_back({c, local_bic(c, q, n), CandidateStatus::Active});
  return out;
}

namespace {

// Connected parts of (district, bidirected) with per-node parents from lookup.
std::vector<CComponent> decompose_parts(NodeSet district,
                                        const std::vector<std::pair<int, int>>& bidirected,
                                        const std::vector<NodeSet>& parent_by_node) {
  std::vector<CComponent> parts;
  NodeSet remaining = district;
  while (remaining != 0) {
    const int start = lowest_node(remaining);
    NodeSet block = node_bit(start);
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto [a, b] : bidirected) {
        if (contains(block, a) && !contains(block, b)) block = with_node(block, b), grew = true;
        if (contains(block, b) && !contains(block, a)) block = with_node(block, a), grew = true;
      }
    }
    CComponent part;
    part.district = block;
    for (auto [a, b] : bidirected)
      if (contains(block, a) && contains(block, b)) part.bidirected.emplace_back(a, b);
    std::sort(part.bidirected.begin(), part.bidirected.end());
    for_each_node(block, [&](int u) { part.parents.push_back(parent_by_node[static_cast<std::size_t>(u)]); });
    parts.push_back(std::move(part));
    remaining &= ~block;
  }
  return parts;
}

struct PoolIndex {
  std::unordered_map<std::string, double> score_by_key;

  double lookup(const CComponent& c) const {
    const auto it = score_by_key.find(c.canonical_key());
    if (it == score_by_key.end())
      throw std::runtime_error(
          "pruning referenced a candidate missing from the pool; the pool is not closed "
          "under edge deletion for the given limits");
    return it->second;
  }
};

struct EdgeRef {
  bool directed;
  int a, b;  // directed: a -> b; bidirected: {a, b}
};

constexpr int kMaxSubsetEdges = 10;  // full subset search bound; above it, singles + full only

// Best combined full-pool score over deletions of edge subsets of c,
// decomposing into parts after each deletion. include_self keeps the empty
// deletion as an option. Returns -inf when no admissible deletion exists.
double best_decomposed_score(const CComponent& c, const PoolIndex& pool,
                             const CandidateLimits& limits, bool include_self) {
  std::vector<EdgeRef> edges;
  const std::vector<int> dnodes = c.district_nodes();
  for (std::size_t k = 0; k < dnodes.size(); ++k)
    for_each_node(c.parents[k], [&](int p) { edges.push_back({true, p, dnodes[k]}); });
  for (auto [a, b] : c.bidirected) edges.push_back({false, a, b});

  const int ne = static_cast<int>(edges.size());
  double best = -std::numeric_limits<double>::infinity();
  if (include_self && within_limits(c, limits)) best = pool.lookup(c);
  if (ne == 0) return best;

  auto evaluate_deletion = [&](std::uint64_t mask) {
    std::vector<NodeSet> parent_by_node(kMaxNodes, 0);
    for (std::size_t k = 0; k < dnodes.size(); ++k)
      parent_by_node[static_cast<std::size_t>(dnodes[k])] = c.parents[k];
    std::vector<std::pair<int, int>> bidirected;
    for (int e = 0; e < ne; ++e) {
      const EdgeRef& edge = edges[static_cast<std::size_t>(e)];
      if ((mask >> e) & 1) {
        if (edge.directed)
          parent_by_node[static_cast<std::size_t>(edge.b)] =
              without_node(parent_by_node[static_cast<std::size_t>(edge.b)], edge.a);
      } else if (!edge.directed) {
        bidirected.emplace_back(edge.a, edge.b);
      }
    }
    double sum = 0.0;
    for (const CComponent& part : decompose_parts(c.district, bidirected, parent_by_node)) {
      if (!within_limits(part, limits)) return;  // this deletion is unavailable
      sum += pool.lookup(part);
    }
    best = std::max(best, sum);
  };

  if (ne <= kMaxSubsetEdges) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << ne); ++mask) evaluate_deletion(mask);
  } else {
    for (int e = 0; e < ne; ++e) evaluate_deletion(std::uint64_t{1} << e);
    evaluate_deletion((std::uint64_t{1} << ne) - 1);
  }
  return best;
}

// Result of redirecting node v: v keeps no parents and its bidirected edges
// become directed edges out of v; the rest of the district re-forms.
std::vector<CComponent> redirect_node(const CComponent& c, int v) {
  std::vector<NodeSet> parent_by_node(kMaxNodes, 0);
  const std::vector<int> dnodes = c.district_nodes();
  for (std::size_t k = 0; k < dnodes.size(); ++k)
    parent_by_node[static_cast<std::size_t>(dnodes[k])] = c.parents[k];
  parent_by_node[static_cast<std::size_t>(v)] = 0;
  std::vector<std::pair<int, int>> bidirected;
  for (auto [a, b] : c.bidirected) {
    if (a == v)
      parent_by_node[static_cast<std::size_t>(b)] = with_node(parent_by_node[static_cast<std::size_t>(b)], v);
    else if (b == v)
      parent_by_node[static_cast<std::size_t>(a)] = with_node(parent_by_node[static_cast<std::size_t>(a)], v);
    else
      bidirected.emplace_back(a, b);
  }
  std::vector<CComponent> parts =
      decompose_parts(without_node(c.district, v), bidirected, parent_by_node);
  CComponent lone;
  lone.district = node_bit(v);
  lone.parents = {0};
  parts.push_back(std::move(lone));
  return parts;
}

}  // namespace

std::size_t prune_candidates(std::vector<ScoredCandidate>& pool, const CandidateLimits& limits) {
  PoolIndex index;
  index.score_by_key.reserve(pool.size());
  for (const ScoredCandidate& sc : pool) {
    const auto [it, inserted] = index.score_by_key.emplace(sc.component.canonical_key(), sc.score);
    if (!inserted) throw std::runtime_error("duplicate candidate in pool");
  }

  std::size_t pruned = 0;
  for (ScoredCandidate& sc : pool) {
    const CComponent& c = sc.component;
    if (c.directed_edge_count() + static_cast<int>(c.bidirected.size()) == 0) continue;

    double best = best_decomposed_score(c, index, limits, /*include_self=*/false);
    if (!(best > sc.score) && c.district_size() >= 2) {
      for (int v : c.district_nodes()) {
        double total = 0.0;
        bool ok = true;
        for (const CComponent& part : redirect_node(c, v)) {
          const double part_best = best_decomposed_score(part, index, limits, /*include_self=*/true);
          if (!std::isfinite(part_best)) {
            ok = false;
            break;
          }
          total += part_best;
        }
        if (ok) best = std::max(best, total);
        if (best > sc.score) break;
      }
    }
    if (best > sc.score) {
      sc.status = CandidateStatus::Pruned;
      ++pruned;
    }
  }
  return pruned;
}

std::vector<ScoredCandidate> active_candidates(const std::vector<ScoredCandidate>& pool) {
  std::vector<ScoredCandidate> out;
  for (const ScoredCandidate& sc : pool)
    if (sc.status == CandidateStatus::Active) out.push_back(sc);
  return out;
}

namespace {

std::string format_component(const CComponent& c) {
  std::ostringstream out;
  bool first = true;
  for (int i : c.district_nodes()) {
    out << (first ? "" : " ") << i;
    first = false;
  }
  out << " | ";
  first = true;
  for (auto [a, b] : c.bidirected) {
    out << (first ? "" : " ") << a << "-" << b;
    first = false;
  }
  out << " | ";
  const std::vector<int> dnodes = c.district_nodes();
  for (std::size_t k = 0; k < dnodes.size(); ++k) {
    out << (k ? " ; " : "") << dnodes[k] << ":";
    for_each_node(c.parents[k], [&](int p) { out << " " << p; });
  }
  return out.str();
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

CComponent parse_component(const std::string& district_field, const std::string& bidir_field,
                           const std::string& parents_field) {
  CComponent c;
  {
    std::istringstream in(district_field);
    int node;
    std::vector<int> nodes;
    while (in >> node) nodes.push_back(node);
    if (nodes.empty()) throw std::runtime_error("candidate line with empty district");
    c.district = set_from_vector(nodes);
  }
  {
    std::istringstream in(bidir_field);
    std::string tok;
    while (in >> tok) {
      const auto dash = tok.find('-');
      if (dash == std::string::npos) throw std::runtime_error("bad bidirected pair: " + tok);
      int a = std::stoi(tok.substr(0, dash));
      int b = std::stoi(tok.substr(dash + 1));
      if (a > b) std::swap(a, b);
      c.bidirected.emplace_back(a, b);
    }
    std::sort(c.bidirected.begin(), c.bidirected.end());
  }
  c.parents.assign(static_cast<std::size_t>(c.district_size()), 0);
  for (const std::string& entry : split_fields(parents_field, ';')) {
    std::istringstream in(entry);
    std::string head;
    if (!(in >> head)) continue;
    if (head.back() != ':') throw std::runtime_error("bad parent entry: " + entry);
    const int node = std::stoi(head.substr(0, head.size() - 1));
    NodeSet w = 0;
    int p;
    while (in >> p) w = with_node(w, p);
    c.parents[static_cast<std::size_t>(c.index_of(node))] = w;
  }
  return c;
}

}  // namespace

void save_candidates(const std::vector<ScoredCandidate>& pool, int d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "aglearn-candidates v1\n";
  out << "nodes: " << d << "\n";
  out << "# district | bidirected | parents | score | status\n";
  char buf[32];
  for (const ScoredCandidate& sc : pool) {
    std::snprintf(buf, sizeof(buf), "%.17g", sc.score);
    out << format_component(sc.component) << " | " << buf << " | "
        << (sc.status == CandidateStatus::Active ? "active" : "pruned") << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ScoredCandidate> load_candidates(const std::string& path, int* d_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("aglearn-candidates v1", 0) != 0)
    throw std::runtime_error(path + ": not an aglearn candidate cache (bad header)");
  int d = -1;
  std::vector<ScoredCandidate> pool;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("nodes:", 0) == 0) {
      d = std::stoi(line.substr(6));
      continue;
    }
    const std::vector<std::string> fields = split_fields(line, '|');
    if (fields.size() != 5) throw std::runtime_error(path + ": malformed candidate line: " + line);
    ScoredCandidate sc;
    sc.component = parse_component(fields[0], fields[1], fields[2]);
    sc.score = std::stod(fields[3]);
    std::istringstream st(fields[4]);
    std::string status;
    st >> status;
    if (status == "active")
      sc.status = CandidateStatus::Active;
    else if (status == "pruned")
      sc.status = CandidateStatus::Pruned;
    else
      throw std::runtime_error(path + ": unknown status: " + status);
    pool.push_back(std::move(sc));
  }
  if (d < 0) throw std::runtime_error(path + ": missing 'nodes:' line");
  for (const ScoredCandidate& sc : pool) {
    sc.component.validate(d);
    if (!sc.component.is_candidate_form())
      throw std::runtime_error(path + ": candidate has a parent inside its own district");
  }
  if (d_out) *d_out = d;
  return pool;
}

std::vector<CComponent> load_candidate_structures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  std::vector<CComponent> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("aglearn-candidates", 0) == 0 ||
        line.rfind("nodes:", 0) == 0)
      continue;
    const std::vector<std::string> fields = split_fields(line, '|');
    if (fields.size() < 3) throw std::runtime_error(path + ": malformed candidate line: " + line);
    CComponent c = parse_component(fields[0], fields[1], fields[2]);
    if (!c.is_candidate_form())
      throw std::runtime_error(path + ": candidate has a parent inside its own district");
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace aglearn
