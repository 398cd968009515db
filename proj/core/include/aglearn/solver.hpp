#pragma once

#include <iosfwd>
#include <limits>

#include "aglearn/admg.hpp"
#include "aglearn/lp.hpp"
#include "aglearn/separation.hpp"

namespace aglearn {

struct SolverConfig {
  double time_limit = 0.0;  // seconds, <= 0 means none
  double gap_tol = 1e-6;    // absolute bound-vs-incumbent pruning tolerance
  int restarts = 20;        // contraction restarts per fractional solution
  int max_cut_rounds = 50;  // heuristic cut rounds per non-root node; root unlimited
  int max_bicluster_pairs = 10;
  std::uint64_t seed = 0;
  std::ostream* log = nullptr;      // per-node solver trace
  std::ostream* cut_log = nullptr;  // one line per emitted cut
};

struct CutCounts {
  long cluster_integral = 0;
  long bicluster_integral = 0;
  long cluster_heuristic = 0;
  long bicluster_heuristic = 0;
  long total() const {
    return cluster_integral + bicluster_integral + cluster_heuristic + bicluster_heuristic;
  }
};

struct SolveResult {
  Admg best_graph{0};
  double best_score = -std::numeric_limits<double>::infinity();
  double proven_bound = std::numeric_limits<double>::infinity();
  double root_bound = std::numeric_limits<double>::infinity();
  double root_gap_percent = 0.0;
  bool optimal = false;
  bool hit_time_limit = false;
  CutCounts cuts_added;
  long nodes_explored = 0;
  long lp_solves = 0;
  double wall_time = 0.0;
};

struct CutLoopResult {
  LpSolution solution;
  int cuts_added = 0;
  bool integral = false;   // solution integral (after the loop)
  bool ancestral = false;  // integral and certified ancestral by separation
};

/// Alternates LP solves with separation: exact cycle separation at integral
/// points, contraction heuristics (cluster first, then bicluster on the
/// highest-mass pairs) at fractional ones. Stops when no violated cut is
/// found or the heuristic round budget is exhausted; integral-point rounds do
/// not count against the budget since each such cut permanently removes the
/// point. Added cuts stay in the model.
CutLoopResult cutting_plane_loop(IpModel& model, const std::vector<VarFix>& fixings,
                                 int max_rounds, const SolverConfig& config, LpBackend& backend);

/// Best-bound branch-and-cut over the model. Returns the score-maximizing
/// ancestral graph assemblable from the model's candidates when run to
/// completion; under a time limit, the incumbent plus a proven bound.
SolveResult branch_and_cut(IpModel& model, const SolverConfig& config,
                           LpBackend* backend = nullptr);

}  // namespace aglearn
