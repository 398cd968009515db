#include <doctest.h>

#include <random>

#include "aglearn/dataset.hpp"

using namespace aglearn;

TEST_CASE("two identical columns give a rank-deficient covariance") {
  Eigen::MatrixXd samples(4, 2);
  samples << 1, 1, 2, 2, 4, 4, -1, -1;
  const Eigen::MatrixXd q = empirical_covariance(samples);
  CHECK(q(0, 0) == doctest::Approx(q(0, 1)));
  CHECK(q(0, 0) == doctest::Approx(q(1, 1)));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(q);
  CHECK(lu.rank() == 1);
}

TEST_CASE("two-point column has variance 2 with divisor N-1") {
  Eigen::MatrixXd samples(2, 1);
  samples << -1, 1;
  const Eigen::MatrixXd q = empirical_covariance(samples);
  CHECK(q(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("covariance converges to the generating matrix") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = 100000;
  // X0 ~ N(0,1), X1 = 0.8 X0 + e, Var(e) = 0.36 -> Sigma = [[1, .8], [.8, 1]]
  Eigen::MatrixXd samples(n, 2);
  for (int r = 0; r < n; ++r) {
    const double x0 = normal(rng);
    samples(r, 0) = x0;
    samples(r, 1) = 0.8 * x0 + 0.6 * normal(rng);
  }
  const Eigen::MatrixXd q = empirical_covariance(samples);
  CHECK(q(0, 0) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(q(0, 1) == doctest::Approx(0.8).epsilon(0.05));
  CHECK(q(1, 1) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("covariance rejects degenerate input") {
  Eigen::MatrixXd one_row(1, 2);
  one_row << 1, 2;
  CHECK_THROWS(empirical_covariance(one_row));

  Eigen::MatrixXd constant(5, 2);
  constant.setOnes();
  constant.col(0) = Eigen::VectorXd::LinSpaced(5, 0, 4);
  CHECK_THROWS(empirical_covariance(constant));
}

TEST_CASE("csv round trip preserves the samples exactly") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(0.0, 3.0);
  Eigen::MatrixXd samples(20, 3);
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 3; ++c) samples(r, c) = normal(rng);
  save_csv(samples, "/tmp/aglearn_test_data.csv");
  const GaussianDataset loaded = load_csv("/tmp/aglearn_test_data.csv");
  CHECK(loaded.n_samples == 20);
  CHECK(loaded.samples.isApprox(samples, 0.0));
}
