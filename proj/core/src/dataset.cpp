#include "aglearn/dataset.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace aglearn {

Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& samples) {
  const auto n = samples.rows();
  const auto d = samples.cols();
  if (n < 2) throw std::invalid_argument("covariance needs at least 2 samples");
  if (n < d + 2)
    std::cerr << "warning: only " << n << " samples for " << d
              << " variables; covariance will be rank-deficient or ill-conditioned\n";
  Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (centered.col(j).squaredNorm() == 0.0)
      throw std::invalid_argument("column " + std::to_string(j) + " has zero variance");
  }
  return (centered.transpose() * centered) / static_cast<double>(n - 1);
}

GaussianDataset make_dataset(Eigen::MatrixXd samples) {
  GaussianDataset ds;
  ds.n_samples = static_cast<int>(samples.rows());
  ds.covariance = empirical_covariance(samples);
  ds.samples = std::move(samples);
  return ds;
}

GaussianDataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  std::size_t cols = 1;
  for (char c : line)
    if (c == ',') ++cols;

  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    std::size_t got = 0;
    while (p < end) {
      double v = 0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{})
        throw std::runtime_error(path + ": bad number in row " + std::to_string(rows + 1));
      values.push_back(v);
      ++got;
      p = next;
      if (p < end && *p == ',') ++p;
    }
    if (got != cols)
      throw std::runtime_error(path + ": row " + std::to_string(rows + 1) + " has " +
                               std::to_string(got) + " fields, expected " + std::to_string(cols));
    ++rows;
  }
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      samples(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * cols + c];
  return make_dataset(std::move(samples));
}

void save_csv(const Eigen::MatrixXd& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (Eigen::Index j = 0; j < samples.cols(); ++j) out << (j ? "," : "") << "x" << j;
  out << "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", samples(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace aglearn
