#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aglearn/dataset.hpp"
#include "aglearn/ricf.hpp"

namespace aglearn {

struct CandidateLimits {
  int max_parents_single = 3;            // parent cap for single-node districts
  int max_district = 2;                  // largest district size enumerated
  int max_parents_per_district_node = 1; // parent cap per node in multi-node districts
  std::uint64_t variable_cap = 10'000'000;

  /// Limits admitting every c-component on d nodes.
  static CandidateLimits unrestricted(int d) {
    return {d - 1, d, d - 1, 10'000'000};
  }
};

/// Number of candidates enumerate_candidates would produce.
std::uint64_t count_candidates(int d, const CandidateLimits& limits);

/// Every single-node-district component with at most max_parents_single
/// parents, plus every p-node district (2 <= p <= max_district) over every
/// connected bidirected pattern with per-node parent sets capped at
/// max_parents_per_district_node. Deterministic order, no duplicates.
/// Throws std::invalid_argument when the count exceeds variable_cap.
std::vector<CComponent> enumerate_candidates(int d, const CandidateLimits& limits);

bool within_limits(const CComponent& c, const CandidateLimits& limits);

std::vector<ScoredCandidate> score_candidates(const std::vector<CComponent>& cands,
                                              const Eigen::MatrixXd& q, int n);

/// Marks as pruned every candidate dominated by a transformation of itself:
/// deleting any subset of its edges, redirecting one district node's
/// bidirected edges into outgoing directed edges, or the composition of the
/// two. Replacement scores are looked up in the full pool; transformations
/// whose pieces fall outside `limits` are skipped. Candidates tied with their
/// best replacement are kept. Returns the number pruned.
std::size_t prune_candidates(std::vector<ScoredCandidate>& pool, const CandidateLimits& limits);

std::vector<ScoredCandidate> active_candidates(const std::vector<ScoredCandidate>& pool);

/// Plain-text candidate cache, one line per candidate:
///   district | bidirected | parents | score | status
void save_candidates(const std::vector<ScoredCandidate>& pool, int d, const std::string& path);
std::vector<ScoredCandidate> load_candidates(const std::string& path, int* d_out = nullptr);

/// Parses candidate structure lines (the cache format without score/status
/// columns, or with them, scores ignored) for manual include lists.
std::vector<CComponent> load_candidate_structures(const std::string& path);

}  // namespace aglearn
