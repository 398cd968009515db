#pragma once

#include <Eigen/Dense>
#include <vector>

#include "aglearn/admg.hpp"

namespace aglearn {

/// Maximum-likelihood parameters of one c-component model, expressed over the
/// local node order `nodes` (district nodes and their parents, ascending).
/// `coeff(i, j)` is the regression weight of edge j -> i and is nonzero only
/// for directed edges of the component; `noise_cov` carries free diagonal
/// entries plus off-diagonal support on the component's bidirected edges.
struct FittedParams {
  std::vector<int> nodes;    // global node ids for local indices
  NodeSet district = 0;      // subset of `nodes` forming the district
  Eigen::MatrixXd coeff;     // local |V_D| x |V_D|
  Eigen::MatrixXd noise_cov; // local |V_D| x |V_D|
  double loglik = 0.0;
  int sweeps = 0;
  bool converged = true;
  std::vector<double> sweep_logliks;  // one entry per completed sweep

  /// Model-implied covariance (I-B)^{-1} Omega (I-B)^{-T} over `nodes`.
  Eigen::MatrixXd implied_covariance() const;
};

struct RicfOptions {
  double tol = 1e-8;       // max absolute parameter change per sweep
  int max_sweeps = 1000;
  bool force_iterative = false;  // run sweeps even where a closed form exists
};

/// Constrained Gaussian MLE of a c-component given the empirical covariance q
/// (divisor N-1) and sample count n. Single-node districts use the closed-form
/// regression; larger districts run residual iterative conditional fitting
/// sweeps until the parameter change drops below tol.
/// Throws std::runtime_error on non-convergence or a singular system.
FittedParams fit_mle(const CComponent& c, const Eigen::MatrixXd& q, int n,
                     const RicfOptions& options = {});

/// Log-likelihood of the component model at the given parameter values;
/// fit_mle returns its maximum.
double ccomponent_loglik(const FittedParams& params, const Eigen::MatrixXd& q, int n);

/// The district's contribution to the graph log-likelihood (the conditional
/// density of district variables given their parents, summed over samples).
double local_loglik(const CComponent& c, const Eigen::MatrixXd& q, int n,
                    const RicfOptions& options = {});

/// Free parameters of a component: 2 per district node plus 1 per edge.
int parameter_count(const CComponent& c);

/// Local BIC contribution: 2 * local_loglik - ln(n) * parameter_count.
double local_bic(const CComponent& c, const Eigen::MatrixXd& q, int n,
                 const RicfOptions& options = {});

/// Sum of local_bic over the c-components of g. Requires g ancestral.
double graph_bic(const Admg& g, const Eigen::MatrixXd& q, int n,
                 const RicfOptions& options = {});

enum class CandidateStatus { Active, Pruned };

struct ScoredCandidate {
  CComponent component;
  double score = 0.0;
  CandidateStatus status = CandidateStatus::Active;
};

}  // namespace aglearn
