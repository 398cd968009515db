#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "aglearn/simulate.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace aglearn;
namespace tst = aglearn::testing;

TEST_CASE("a single-node random dag is empty") {
  std::mt19937_64 rng(1);
  CHECK(random_dag(1, 3, rng).edge_count() == 0);
}

TEST_CASE("random dags are acyclic and respect the parent cap") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Admg dag = random_dag(8, 3, rng);
    CHECK_FALSE(find_directed_cycle(dag).has_value());
    CHECK(dag.bidirected_edge_count() == 0);
    for (int i = 0; i < 8; ++i) CHECK(set_size(dag.parents(i)) <= 3);
  }
}

TEST_CASE("parent-set sizes follow the uniform rule") {
  const int draws = 10000;

  // Two nodes: the later one draws its parent count uniformly on {0, 1}.
  std::mt19937_64 rng(3);
  long with_edge = 0;
  for (int trial = 0; trial < draws; ++trial) with_edge += random_dag(2, 3, rng).edge_count();
  const double p = static_cast<double>(with_edge) / draws;
  const double chi2 = draws * ((p - 0.5) * (p - 0.5) / 0.5 + (0.5 - p) * (0.5 - p) / 0.5);
  CHECK(chi2 < 10.83);  // chi-square(1) at the 0.1% level

  // Positions 0..3 contribute mean sizes 0, 0.5, 1, 1.5: 3 edges on average.
  long total_edges = 0;
  for (int trial = 0; trial < draws; ++trial) total_edges += random_dag(4, 3, rng).edge_count();
  CHECK(static_cast<double>(total_edges) / draws == doctest::Approx(3.0).epsilon(0.03));

  // Past the cap the per-position mean saturates at 1.5.
  total_edges = 0;
  for (int trial = 0; trial < draws; ++trial) total_edges += random_dag(6, 3, rng).edge_count();
  CHECK(static_cast<double>(total_edges) / draws == doctest::Approx(6.0).epsilon(0.03));
}

TEST_CASE("an edgeless sem yields independent columns with bounded variance") {
  std::mt19937_64 rng(5);
  const Admg dag(3);
  const SemParams params = random_sem_params(dag, rng);
  const Eigen::MatrixXd samples = sample_sem(dag, params, 0, 50000, rng);
  for (int c = 0; c < 3; ++c) {
    const double var =
        (samples.col(c).array() - samples.col(c).mean()).square().sum() / (samples.rows() - 1);
    CHECK(var == doctest::Approx(params.noise_vars(c)).epsilon(0.05));
    CHECK(params.noise_vars(c) >= 0.5);
    CHECK(params.noise_vars(c) <= 1.5);
  }
}

TEST_CASE("a weighted chain reproduces its analytic covariance") {
  std::mt19937_64 rng(6);
  const Admg dag(2, {{0, 1}}, {});
  SemParams params;
  params.weights = Eigen::MatrixXd::Zero(2, 2);
  params.weights(1, 0) = 0.7;
  params.noise_vars = Eigen::VectorXd::Ones(2);
  const Eigen::MatrixXd samples = sample_sem(dag, params, 0, 100000, rng);
  const Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
  const Eigen::MatrixXd q = centered.transpose() * centered / (samples.rows() - 1);
  CHECK(q(0, 0) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(q(0, 1) == doctest::Approx(0.7).epsilon(0.05));
  CHECK(q(1, 1) == doctest::Approx(0.7 * 0.7 + 1.0).epsilon(0.05));
}

TEST_CASE("sampling is bit-reproducible under a fixed seed") {
  const GroundTruthInstance a = make_instance(5, 1, 100, 42);
  const GroundTruthInstance b = make_instance(5, 1, 100, 42);
  CHECK(a.samples == b.samples);
  CHECK(a.observed_ag == b.observed_ag);
}

TEST_CASE("the confounded five-node dag projects onto its known truth") {
  const Admg proj = latent_project(tst::confounded_five_node_dag(), node_bit(0));
  CHECK(proj == tst::confounded_projection_truth());
}

TEST_CASE("projection without latents is the identity") {
  std::mt19937_64 rng(7);
  const Admg dag = random_dag(6, 3, rng);
  CHECK(latent_project(dag, 0) == dag);
}

TEST_CASE("projections are always ancestral") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const Admg dag = random_dag(8, 3, rng);
    const int l = std::uniform_int_distribution<int>(0, 4)(rng);
    NodeSet latents = 0;
    while (set_size(latents) < l)
      latents = with_node(latents, std::uniform_int_distribution<int>(0, 7)(rng));
    CHECK(is_ancestral(latent_project(dag, latents)));
  }
}

TEST_CASE("projecting the canonical dag of an ancestral graph returns it") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const Admg ag = tst::random_ancestral_graph(6, rng);
    auto [dag, latents] = canonical_dag(ag);
    CHECK(latent_project(dag, latents) == ag);
  }
}

TEST_CASE("instance bundles round-trip through the filesystem") {
  const GroundTruthInstance inst = make_instance(4, 1, 50, 77);
  const std::string dir = "/tmp/aglearn_test_bundle";
  std::filesystem::remove_all(dir);
  save_instance(inst, 4, 1, 77, dir);
  CHECK(load_instance_truth(dir) == inst.observed_ag);
  const GaussianDataset data = load_instance_data(dir);
  CHECK(data.n_samples == 50);
  CHECK(data.samples.isApprox(inst.samples, 0.0));
  std::ifstream meta(dir + "/meta.json");
  CHECK(meta.good());
}
