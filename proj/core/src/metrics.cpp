#include "aglearn/metrics.hpp"

#include <stdexcept>

namespace aglearn {

namespace {

// Edge pattern of an unordered pair: bit 0 = a->b, bit 1 = b->a, bit 2 = a<->b.
int pair_pattern(const Admg& g, int a, int b) {
  return (g.has_directed(a, b) ? 1 : 0) | (g.has_directed(b, a) ? 2 : 0) |
         (g.has_bidirected(a, b) ? 4 : 0);
}

void check_same_nodes(const Admg& g1, const Admg& g2) {
  if (g1.node_count() != g2.node_count())
    throw std::invalid_argument("graphs have different node counts");
}

}  // namespace

int shd(const Admg& g1, const Admg& g2) {
  check_same_nodes(g1, g2);
  int distance = 0;
  for (int a = 0; a < g1.node_count(); ++a)
    for (int b = a + 1; b < g1.node_count(); ++b)
      if (pair_pattern(g1, a, b) != pair_pattern(g2, a, b)) ++distance;
  return distance;
}

std::pair<double, double> precision_recall(const Admg& pred, const Admg& truth) {
  check_same_nodes(pred, truth);
  int correct = 0, pred_edges = 0, truth_edges = 0;
  for (int a = 0; a < pred.node_count(); ++a)
    for (int b = a + 1; b < pred.node_count(); ++b) {
      const int pp = pair_pattern(pred, a, b);
      const int pt = pair_pattern(truth, a, b);
      if (pp != 0) ++pred_edges;
      if (pt != 0) ++truth_edges;
      if (pp != 0 && pp == pt) ++correct;
    }
  if (pred_edges == 0 && truth_edges == 0) return {1.0, 1.0};
  const double precision = pred_edges == 0 ? 0.0 : static_cast<double>(correct) / pred_edges;
  const double recall = truth_edges == 0 ? 0.0 : static_cast<double>(correct) / truth_edges;
  return {precision, recall};
}

}  // namespace aglearn
