#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aglearn/admg.hpp"
#include "aglearn/dataset.hpp"

namespace aglearn {

struct SemParams {
  Eigen::MatrixXd weights;      // weights(head, tail) nonzero on directed edges
  Eigen::VectorXd noise_vars;   // per node
};

struct GroundTruthInstance {
  Admg full_dag{0};          // over d + l nodes, directed edges only
  SemParams params;
  NodeSet latents = 0;
  Admg observed_ag{0};       // over the d observed nodes, re-indexed
  Eigen::MatrixXd samples;   // N x d, columns in ascending observed-node order
};

/// Random DAG: a uniform permutation orders the nodes; each node draws a
/// parent-set size uniformly from {0..min(max_parents, #earlier)} and parents
/// uniformly without replacement among earlier nodes.
Admg random_dag(int total, int max_parents, std::mt19937_64& rng);

/// Random linear-Gaussian parameterization: edge weights uniform on
/// [-1,-0.3] u [0.3,1], noise variances uniform on [0.5, 1.5].
SemParams random_sem_params(const Admg& dag, std::mt19937_64& rng);

/// Draws n rows of X = MX + eps in topological order and drops the latent
/// columns; remaining columns follow ascending node order.
Eigen::MatrixXd sample_sem(const Admg& dag, const SemParams& params, NodeSet latents, int n,
                           std::mt19937_64& rng);

/// Convenience wrapper: parameterize then sample.
Eigen::MatrixXd parametrize_and_sample(const Admg& dag, NodeSet latents, int n,
                                       std::mt19937_64& rng);

/// Latent projection onto the observed nodes: a -> b for directed paths
/// through latents only, a <-> b for a common latent cause, then bidirected
/// edges between ancestrally ordered pairs are replaced by directed ones.
/// The result is ancestral and re-indexed to 0..d-1 in ascending order of the
/// observed nodes.
Admg latent_project(const Admg& dag, NodeSet latents);

/// Canonical DAG of an ancestral graph: one extra latent node per bidirected
/// edge, pointing at both endpoints. Returns the DAG and its latent set;
/// latent_project of the result reproduces the input graph.
std::pair<Admg, NodeSet> canonical_dag(const Admg& ag);

GroundTruthInstance make_instance(int d, int l, int n, std::uint64_t seed);

/// Instance bundle directory: truth.graph, data.csv, meta.json.
void save_instance(const GroundTruthInstance& inst, int d, int l, std::uint64_t seed,
                   const std::string& dir);
GaussianDataset load_instance_data(const std::string& dir);
Admg load_instance_truth(const std::string& dir);

}  // namespace aglearn
