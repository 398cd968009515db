#pragma once

// Independent reference implementations used only by the test suites. They
// deliberately avoid the library's algorithms: districts via union-find,
// reachability via matrix closure, likelihoods via per-sample density sums,
// and a naive standard-form simplex as the LP reference.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "aglearn/admg.hpp"
#include "aglearn/ip_model.hpp"
#include "aglearn/ricf.hpp"

namespace aglearn::testing {

std::vector<NodeSet> union_find_districts(const Admg& g);

/// Reachability by repeated squaring of the adjacency matrix.
std::vector<NodeSet> closure_reachability(const Admg& g);
bool has_directed_cycle_oracle(const Admg& g);
bool has_almost_directed_cycle_oracle(const Admg& g);
bool is_ancestral_oracle(const Admg& g);

/// Arbitrary mixed graph; may be cyclic or non-ancestral.
Admg random_mixed_graph(int d, double edge_prob, std::mt19937_64& rng);
/// Ancestral graph via a random DAG with random latents projected out.
Admg random_ancestral_graph(int d, std::mt19937_64& rng);

/// Sum over (centered) sample rows of the conditional log-density the fitted
/// component assigns to its district given the parents.
double density_sum_loglik(const FittedParams& fit, const Eigen::MatrixXd& samples);

/// Cluster mass of S at z: each candidate counts once if some of its district
/// nodes inside S keeps all parents outside S.
double direct_mu(const std::vector<double>& z, const std::vector<ScoredCandidate>& vars,
                 NodeSet subset);

/// All integral selections satisfying the partition rows, visited as index
/// lists (candidates covering disjoint districts whose union is V).
void for_each_selection(const std::vector<ScoredCandidate>& vars, int d,
                        const std::function<void(const std::vector<int>&)>& fn);

/// Independent count of the candidate components within the given caps,
/// built by direct recursion over districts and parent assignments.
long recursive_candidate_count(int d, int max_parents_single, int max_district,
                               int max_parents_per_node);

struct ReferenceLpResult {
  bool feasible = false;
  double objective = 0.0;
};

/// Naive Bland's-rule simplex over the standard form of the model's
/// relaxation (explicit upper-bound rows, artificial start). Slow but
/// independent of the production solver.
ReferenceLpResult reference_lp_solve(const IpModel& model);

}  // namespace aglearn::testing
