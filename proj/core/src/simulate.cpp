#include "aglearn/simulate.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "aglearn/graph_io.hpp"

namespace aglearn {

Admg random_dag(int total, int max_parents, std::mt19937_64& rng) {
  Admg g(total);
  std::vector<int> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int pos = 1; pos < total; ++pos) {
    const int node = order[static_cast<std::size_t>(pos)];
    const int cap = std::min(max_parents, pos);
    const int size = std::uniform_int_distribution<int>(0, cap)(rng);
    // partial Fisher-Yates over the prefix
    std::vector<int> prefix(order.begin(), order.begin() + pos);
    for (int k = 0; k < size; ++k) {
      const int pick = std::uniform_int_distribution<int>(k, pos - 1)(rng);
      std::swap(prefix[static_cast<std::size_t>(k)], prefix[static_cast<std::size_t>(pick)]);
      g.add_directed(prefix[static_cast<std::size_t>(k)], node);
    }
  }
  return g;
}

SemParams random_sem_params(const Admg& dag, std::mt19937_64& rng) {
  const int t = dag.node_count();
  SemParams params;
  params.weights = Eigen::MatrixXd::Zero(t, t);
  params.noise_vars = Eigen::VectorXd::Zero(t);
  std::uniform_real_distribution<double> magnitude(0.3, 1.0);
  std::uniform_real_distribution<double> variance(0.5, 1.5);
  std::bernoulli_distribution negative(0.5);
  for (auto [tail, head] : dag.directed_edges()) {
    const double w = magnitude(rng);
    params.weights(head, tail) = negative(rng) ? -w : w;
  }
  for (int i = 0; i < t; ++i) params.noise_vars(i) = variance(rng);
  return params;
}

namespace {

std::vector<int> topological_order(const Admg& dag) {
  const int t = dag.node_count();
  std::vector<int> indegree(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) indegree[static_cast<std::size_t>(i)] = set_size(dag.parents(i));
  std::vector<int> order;
  std::vector<int> ready;
  for (int i = 0; i < t; ++i)
    if (indegree[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), std::greater<>());
    const int u = ready.back();
    ready.pop_back();
    order.push_back(u);
    for_each_node(dag.children(u), [&](int v) {
      if (--indegree[static_cast<std::size_t>(v)] == 0) {
        ready.push_back(v);
        std::push_heap(ready.begin(), ready.end(), std::greater<>());
      }
    });
  }
  if (static_cast<int>(order.size()) != t)
    throw std::invalid_argument("graph has a directed cycle");
  return order;
}

}  // namespace

Eigen::MatrixXd sample_sem(const Admg& dag, const SemParams& params, NodeSet latents, int n,
                           std::mt19937_64& rng) {
  const int t = dag.node_count();
  const std::vector<int> order = topological_order(dag);
  std::normal_distribution<double> standard_normal(0.0, 1.0);
  Eigen::MatrixXd all(n, t);
  std::vector<double> sd(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) sd[static_cast<std::size_t>(i)] = std::sqrt(params.noise_vars(i));
  for (int row = 0; row < n; ++row) {
    for (int node : order) {
      double value = sd[static_cast<std::size_t>(node)] * standard_normal(rng);
      for_each_node(dag.parents(node),
                    [&](int p) { value += params.weights(node, p) * all(row, p); });
      all(row, node) = value;
    }
  }
  const std::vector<int> observed = set_to_vector(full_set(t) & ~latents);
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(observed.size()));
  for (std::size_t c = 0; c < observed.size(); ++c)
    out.col(static_cast<Eigen::Index>(c)) = all.col(observed[c]);
  return out;
}

Eigen::MatrixXd parametrize_and_sample(const Admg& dag, NodeSet latents, int n,
                                       std::mt19937_64& rng) {
  const SemParams params = random_sem_params(dag, rng);
  return sample_sem(dag, params, latents, n, rng);
}

Admg latent_project(const Admg& dag, NodeSet latents) {
  const int t = dag.node_count();
  const std::vector<int> observed = set_to_vector(full_set(t) & ~latents);
  std::vector<int> new_index(static_cast<std::size_t>(t), -1);
  for (std::size_t k = 0; k < observed.size(); ++k)
    new_index[static_cast<std::size_t>(observed[k])] = static_cast<int>(k);

  // Nodes reachable from `start` through latent intermediates only.
  auto latent_reach = [&](int start) {
    NodeSet seen = 0;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for_each_node(dag.children(u) & ~seen, [&](int v) {
        seen = with_node(seen, v);
        if (contains(latents, v)) stack.push_back(v);
      });
    }
    return seen;  // may contain latents; callers mask
  };

  std::vector<std::pair<int, int>> directed;
  std::vector<std::pair<int, int>> bidirected;
  for (int a : observed)
    for_each_node(latent_reach(a) & ~latents,
                  [&](int b) { directed.emplace_back(new_index[static_cast<std::size_t>(a)],
                                                     new_index[static_cast<std::size_t>(b)]); });
  for_each_node(latents, [&](int h) {
    const std::vector<int> reached = set_to_vector(latent_reach(h) & ~latents);
    for (std::size_t x = 0; x < reached.size(); ++x)
      for (std::size_t y = x + 1; y < reached.size(); ++y)
        bidirected.emplace_back(new_index[static_cast<std::size_t>(reached[x])],
                                new_index[static_cast<std::size_t>(reached[y])]);
  });
  std::sort(bidirected.begin(), bidirected.end());
  bidirected.erase(std::unique(bidirected.begin(), bidirected.end()), bidirected.end());

  Admg proj(static_cast<int>(observed.size()));
  for (auto [a, b] : directed) proj.add_directed(a, b);

  // A bidirected edge between an ancestrally ordered pair becomes directed;
  // the replacement cannot create new ancestor relations, so one pass with
  // the projected reachability is enough.
  for (auto [a, b] : bidirected) {
    if (contains(descendants(proj, a), b)) {
      if (!proj.has_directed(a, b)) proj.add_directed(a, b);
    } else if (contains(descendants(proj, b), a)) {
      if (!proj.has_directed(b, a)) proj.add_directed(b, a);
    } else {
      proj.add_bidirected(a, b);
    }
  }
  if (!is_ancestral(proj))
    throw std::logic_error("internal error: latent projection is not ancestral");
  return proj;
}

std::pair<Admg, NodeSet> canonical_dag(const Admg& ag) {
  const int d = ag.node_count();
  const auto bidirected = ag.bidirected_edges();
  Admg dag(d + static_cast<int>(bidirected.size()));
  for (auto [tail, head] : ag.directed_edges()) dag.add_directed(tail, head);
  NodeSet latents = 0;
  for (std::size_t k = 0; k < bidirected.size(); ++k) {
    const int h = d + static_cast<int>(k);
    dag.add_directed(h, bidirected[k].first);
    dag.add_directed(h, bidirected[k].second);
    latents = with_node(latents, h);
  }
  return {dag, latents};
}

GroundTruthInstance make_instance(int d, int l, int n, std::uint64_t seed) {
  GroundTruthInstance inst;
  std::mt19937_64 rng(seed);
  inst.full_dag = random_dag(d + l, 3, rng);
  inst.params = random_sem_params(inst.full_dag, rng);

  std::vector<int> nodes(static_cast<std::size_t>(d + l));
  std::iota(nodes.begin(), nodes.end(), 0);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  inst.latents = 0;
  for (int k = 0; k < l; ++k) inst.latents = with_node(inst.latents, nodes[static_cast<std::size_t>(k)]);

  inst.observed_ag = latent_project(inst.full_dag, inst.latents);
  inst.samples = sample_sem(inst.full_dag, inst.params, inst.latents, n, rng);
  return inst;
}

void save_instance(const GroundTruthInstance& inst, int d, int l, std::uint64_t seed,
                   const std::string& dir) {
  std::filesystem::create_directories(dir);
  save_graph(inst.observed_ag, dir + "/truth.graph");
  save_csv(inst.samples, dir + "/data.csv");
  nlohmann::json meta;
  meta["schema"] = 1;
  meta["seed"] = seed;
  meta["d"] = d;
  meta["l"] = l;
  meta["n"] = static_cast<int>(inst.samples.rows());
  meta["weight_range"] = {0.3, 1.0};
  meta["noise_variance_range"] = {0.5, 1.5};
  meta["latents"] = set_to_vector(inst.latents);
  std::ofstream out(dir + "/meta.json");
  if (!out) throw std::runtime_error("cannot open for writing: " + dir + "/meta.json");
  out << meta.dump(2) << "\n";
}

GaussianDataset load_instance_data(const std::string& dir) { return load_csv(dir + "/data.csv"); }

Admg load_instance_truth(const std::string& dir) { return load_graph(dir + "/truth.graph"); }

}  // namespace aglearn
