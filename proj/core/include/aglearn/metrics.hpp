#pragma once

#include <utility>

#include "aglearn/admg.hpp"

namespace aglearn {

/// Per unordered pair: 0 when both graphs carry the same edge pattern
/// (including both empty), 1 otherwise. Throws on node-count mismatch.
int shd(const Admg& g1, const Admg& g2);

/// Correct = pairs adjacent in both graphs with identical pattern.
/// precision = correct / #adjacent(pred), recall = correct / #adjacent(truth);
/// both-empty graphs score (1, 1), an empty side scores 0.
std::pair<double, double> precision_recall(const Admg& pred, const Admg& truth);

}  // namespace aglearn
