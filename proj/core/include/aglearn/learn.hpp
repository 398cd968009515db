#pragma once

#include <string>

#include "aglearn/candidates.hpp"
#include "aglearn/solver.hpp"

namespace aglearn {

struct LearnOptions {
  CandidateLimits limits;
  bool prune = true;
  SolverConfig solver;
  std::string load_candidates_path;     // skip enumeration + scoring
  std::string save_candidates_path;     // write the scored pool
  std::string include_candidates_path;  // extra hand-picked components
  std::string lp_export_path;           // dump the root model
};

struct LearnReport {
  SolveResult solve;
  std::size_t vars_before = 0;  // scored candidates before pruning
  std::size_t vars_after = 0;   // candidates entering the model
  double t_covariance = 0.0;
  double t_enumerate = 0.0;
  double t_score = 0.0;
  double t_prune = 0.0;
  double t_solve = 0.0;
  double t_total = 0.0;
};

/// Full pipeline: covariance, candidate enumeration, scoring, pruning,
/// branch-and-cut.
LearnReport run_learn(const GaussianDataset& data, const LearnOptions& options);

}  // namespace aglearn
