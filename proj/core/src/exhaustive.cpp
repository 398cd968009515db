#include "aglearn/exhaustive.hpp"

#include <stdexcept>

namespace aglearn {

std::vector<Admg> all_ancestral_admgs(int d) {
  if (d < 1 || d > 4) throw std::invalid_argument("exhaustive enumeration supports 1..4 nodes");
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) pairs.emplace_back(a, b);

  std::vector<Admg> out;
  std::vector<int> state(pairs.size(), 0);  // 0 none, 1 a->b, 2 b->a, 3 a<->b
  while (true) {
    Admg g(d);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      const auto [a, b] = pairs[e];
      switch (state[e]) {
        case 1: g.add_directed(a, b); break;
        case 2: g.add_directed(b, a); break;
        case 3: g.add_bidirected(a, b); break;
        default: break;
      }
    }
    // Restrict to the solver's hypothesis space: ancestral graphs whose
    // districts take their parents from outside (candidate-form components).
    if (is_ancestral(g) && !has_directed_edge_within_district(g)) out.push_back(std::move(g));

    std::size_t e = 0;
    while (e < pairs.size() && state[e] == 3) state[e++] = 0;
    if (e == pairs.size()) break;
    ++state[e];
  }
  return out;
}

ExhaustiveResult exhaustive_search(const GaussianDataset& data) {
  ExhaustiveResult result;
  bool first = true;
  for (const Admg& g : all_ancestral_admgs(data.dim())) {
    const double score = graph_bic(g, data.covariance, data.n_samples);
    ++result.graphs_scored;
    if (first || score > result.best_score) {
      result.best_score = score;
      result.best_graph = g;
      first = false;
    }
  }
  return result;
}

}  // namespace aglearn
