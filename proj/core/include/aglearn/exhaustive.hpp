#pragma once

#include <vector>

#include "aglearn/dataset.hpp"
#include "aglearn/ricf.hpp"

namespace aglearn {

/// Every ancestral directed mixed graph on d nodes whose districts take all
/// parents from outside — exactly the graphs assemblable from a full
/// candidate pool (d <= 4 enforced; the space grows as 4^(d choose 2) before
/// filtering).
std::vector<Admg> all_ancestral_admgs(int d);

struct ExhaustiveResult {
  Admg best_graph{0};
  double best_score = 0.0;
  long graphs_scored = 0;
};

/// Scores every ancestral graph with graph_bic and returns the argmax.
/// The reference answer for the branch-and-cut solver on small instances.
ExhaustiveResult exhaustive_search(const GaussianDataset& data);

}  // namespace aglearn
