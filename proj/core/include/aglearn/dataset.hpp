#pragma once

#include <Eigen/Dense>
#include <string>

namespace aglearn {

struct GaussianDataset {
  Eigen::MatrixXd samples;     // N x d, raw values
  int n_samples = 0;           // N
  Eigen::MatrixXd covariance;  // d x d, from centered columns, divisor N-1

  int dim() const { return static_cast<int>(covariance.cols()); }
};

/// Unbiased sample covariance of the column-centered matrix (divisor N-1).
/// Throws std::invalid_argument for N < 2 or a zero-variance column; warns on
/// stderr when N < d + 2.
Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& samples);

GaussianDataset make_dataset(Eigen::MatrixXd samples);

/// CSV with a header row, comma-separated decimal floats, one sample per row.
GaussianDataset load_csv(const std::string& path);
void save_csv(const Eigen::MatrixXd& samples, const std::string& path);

}  // namespace aglearn
