#include <doctest.h>

#include <cmath>
#include <random>

#include "aglearn/ricf.hpp"
#include "aglearn/simulate.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace aglearn;
namespace tst = aglearn::testing;

namespace {

GaussianDataset dataset_for(const Admg& ag, int n, std::uint64_t seed) {
  auto [dag, latents] = canonical_dag(ag);
  std::mt19937_64 rng(seed);
  return make_dataset(parametrize_and_sample(dag, latents, n, rng));
}

// All free parameter slots of a fitted component: directed-edge coefficients,
// then the noise-covariance support (diagonals and bidirected entries).
std::vector<std::pair<int, int>> free_slots(const CComponent& c, const FittedParams& fit) {
  std::vector<std::pair<int, int>> slots;  // (row, col); col == -1 means coeff slot marker
  const int k = static_cast<int>(fit.nodes.size());
  auto local = [&](int node) {
    for (int li = 0; li < k; ++li)
      if (fit.nodes[static_cast<std::size_t>(li)] == node) return li;
    REQUIRE(false);
    return -1;
  };
  const std::vector<int> dnodes = c.district_nodes();
  for (std::size_t di = 0; di < dnodes.size(); ++di)
    for_each_node(c.parents[di], [&](int p) { slots.emplace_back(local(dnodes[di]), ~local(p)); });
  for (int li = 0; li < k; ++li) slots.emplace_back(li, li);
  for (auto [a, b] : c.bidirected) slots.emplace_back(local(a), local(b));
  return slots;
}

// Joint Gaussian log-likelihood over all component nodes; the function the
// fitter maximizes (the district term differs from it by the parent
// marginals, which are stationary only jointly).
double joint_loglik_of(const FittedParams& fit, const Eigen::MatrixXd& q, int n) {
  const int k = static_cast<int>(fit.nodes.size());
  const double scale = static_cast<double>(n - 1) / n;
  Eigen::MatrixXd s(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c)
      s(r, c) = scale * q(fit.nodes[static_cast<std::size_t>(r)],
                          fit.nodes[static_cast<std::size_t>(c)]);
  const Eigen::MatrixXd sigma = fit.implied_covariance();
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
    throw std::runtime_error("not positive definite");
  const double logdet = ldlt.vectorD().array().log().sum();
  return -0.5 * n *
         (k * std::log(2 * std::acos(-1.0)) + logdet + ldlt.solve(s).trace());
}

double loglik_at(FittedParams fit, const std::pair<int, int>& slot, double delta,
                 const Eigen::MatrixXd& q, int n) {
  if (slot.second < 0)
    fit.coeff(slot.first, ~slot.second) += delta;
  else if (slot.first == slot.second)
    fit.noise_cov(slot.first, slot.second) += delta;
  else {
    fit.noise_cov(slot.first, slot.second) += delta;
    fit.noise_cov(slot.second, slot.first) += delta;
  }
  return joint_loglik_of(fit, q, n);
}

}  // namespace

TEST_CASE("fit of a lone node is the scaled sample variance") {
  Eigen::MatrixXd q(1, 1);
  q << 2.5;
  const int n = 50;
  const FittedParams fit = fit_mle(tst::single(0), q, n);
  CHECK(fit.coeff.isZero(0.0));
  CHECK(fit.noise_cov(0, 0) == doctest::Approx(2.5 * 49.0 / 50.0).epsilon(1e-12));
}

TEST_CASE("one-regressor closed form") {
  Eigen::MatrixXd q(2, 2);
  q << 1.0, 0.5, 0.5, 1.0;
  const int n = 100;
  const FittedParams fit = fit_mle(tst::single(0, node_bit(1)), q, n);
  const int i0 = fit.nodes[0] == 0 ? 0 : 1;
  const int i1 = 1 - i0;
  CHECK(fit.coeff(i0, i1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.noise_cov(i0, i0) == doctest::Approx(0.75 * 99.0 / 100.0).epsilon(1e-12));
  CHECK(fit.noise_cov(i1, i1) == doctest::Approx(1.0 * 99.0 / 100.0).epsilon(1e-12));
}

TEST_CASE("saturated bidirected pair fits the scaled covariance and maximizes the likelihood") {
  const GaussianDataset data = dataset_for(Admg(2, {}, {{0, 1}}), 400, 21);
  const CComponent c = tst::pair_component(0, 1, 0, 0);
  const FittedParams fit = fit_mle(c, data.covariance, data.n_samples);

  const double scale = static_cast<double>(data.n_samples - 1) / data.n_samples;
  CHECK(fit.noise_cov.isApprox(scale * data.covariance, 1e-9));

  // No constrained-support perturbation may beat the fit.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto slots = free_slots(c, fit);
  for (int trial = 0; trial < 500; ++trial) {
    FittedParams perturbed = fit;
    for (const auto& slot : slots) {
      const double delta = 0.05 * normal(rng);
      if (slot.second < 0)
        perturbed.coeff(slot.first, ~slot.second) += delta;
      else if (slot.first == slot.second)
        perturbed.noise_cov(slot.first, slot.first) += delta;
      else {
        perturbed.noise_cov(slot.first, slot.second) += delta;
        perturbed.noise_cov(slot.second, slot.first) += delta;
      }
    }
    double ll_perturbed;
    try {
      ll_perturbed = ccomponent_loglik(perturbed, data.covariance, data.n_samples);
    } catch (const std::exception&) {
      continue;  // perturbation left the PD cone
    }
    CHECK(fit.loglik >= ll_perturbed - 1e-9);
  }
}

TEST_CASE("lone-node district term has the closed form") {
  const GaussianDataset data = dataset_for(Admg(1), 200, 33);
  const double q00 = data.covariance(0, 0);
  const int n = data.n_samples;
  const double sigma2 = (n - 1.0) / n * q00;
  const double expected = -0.5 * n * (std::log(2 * std::acos(-1.0)) + std::log(sigma2) + 1.0);
  const FittedParams fit = fit_mle(tst::single(0), data.covariance, n);
  CHECK(fit.loglik == doctest::Approx(expected).epsilon(1e-12));
  CHECK(fit.loglik ==
        doctest::Approx(tst::density_sum_loglik(fit, data.samples)).epsilon(1e-10));
}

TEST_CASE("district terms equal per-sample conditional density sums") {
  std::mt19937_64 seed_rng(101);
  int checked = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const Admg ag = tst::random_ancestral_graph(5, seed_rng);
    const GaussianDataset data = dataset_for(ag, 200, 1000 + trial);
    for (const CComponent& c : all_c_components(ag)) {
      const FittedParams fit = fit_mle(c, data.covariance, data.n_samples);
      const double oracle = tst::density_sum_loglik(fit, data.samples);
      CHECK(fit.loglik == doctest::Approx(oracle).epsilon(1e-9));
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("parameter counts and the lone-node BIC") {
  CHECK(parameter_count(tst::single(0)) == 2);
  CHECK(parameter_count(tst::single(1, node_bit(0) | node_bit(2))) == 4);
  // {A} -> B <-> C <- {D}: 2 nodes * 2 + 2 directed + 1 bidirected
  CHECK(parameter_count(tst::pair_component(1, 2, node_bit(0), node_bit(3))) == 7);

  const GaussianDataset data = dataset_for(Admg(1), 120, 77);
  const CComponent c = tst::single(0);
  const double ll = local_loglik(c, data.covariance, data.n_samples);
  CHECK(local_bic(c, data.covariance, data.n_samples) ==
        doctest::Approx(2 * ll - 2 * std::log(data.n_samples)).epsilon(1e-12));
}

TEST_CASE("graph BIC decomposes over c-components") {
  std::mt19937_64 seed_rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const Admg ag = tst::random_ancestral_graph(6, seed_rng);
    const GaussianDataset data = dataset_for(ag, 300, 2000 + trial);
    double total = 0.0;
    for (const CComponent& c : all_c_components(ag))
      total += local_bic(c, data.covariance, data.n_samples);
    const double whole = graph_bic(ag, data.covariance, data.n_samples);
    CHECK(whole == doctest::Approx(total).epsilon(1e-9));
  }
}

TEST_CASE("empty-graph BIC is the sum of lone-node scores") {
  const GaussianDataset data = dataset_for(Admg(3), 150, 88);
  double expected = 0.0;
  for (int i = 0; i < 3; ++i)
    expected += local_bic(tst::single(i), data.covariance, data.n_samples);
  CHECK(graph_bic(Admg(3), data.covariance, data.n_samples) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("graph BIC rejects non-ancestral graphs") {
  const GaussianDataset data = dataset_for(Admg(2), 100, 99);
  CHECK_THROWS(graph_bic(Admg(2, {{0, 1}, {1, 0}}, {}), data.covariance, data.n_samples));
}

TEST_CASE("the multi-district fixture scores as the sum of its four components") {
  const Admg g = tst::multi_district_graph();
  const GaussianDataset data = dataset_for(g, 500, 123);
  const std::vector<CComponent> comps = all_c_components(g);
  REQUIRE(comps.size() == 4);
  double component_sum = 0.0;
  double density_total = 0.0;
  for (const CComponent& c : comps) {
    const FittedParams fit = fit_mle(c, data.covariance, data.n_samples);
    component_sum += local_bic(c, data.covariance, data.n_samples);
    density_total += tst::density_sum_loglik(fit, data.samples);
  }
  CHECK(graph_bic(g, data.covariance, data.n_samples) ==
        doctest::Approx(component_sum).epsilon(1e-10));
  // The component conditional densities multiply to the joint density.
  double loglik_total = 0.0;
  for (const CComponent& c : comps)
    loglik_total += local_loglik(c, data.covariance, data.n_samples);
  CHECK(loglik_total == doctest::Approx(density_total).epsilon(1e-9));
}

TEST_CASE("RICF sweeps never decrease the likelihood") {
  std::mt19937_64 seed_rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const Admg ag = tst::random_ancestral_graph(6, seed_rng);
    const GaussianDataset data = dataset_for(ag, 250, 3000 + trial);
    for (const CComponent& c : all_c_components(ag)) {
      if (c.district_size() < 2) continue;
      const FittedParams fit = fit_mle(c, data.covariance, data.n_samples);
      for (std::size_t s = 1; s < fit.sweep_logliks.size(); ++s)
        CHECK(fit.sweep_logliks[s] >=
              fit.sweep_logliks[s - 1] - 1e-7 * (1 + std::abs(fit.sweep_logliks[s - 1])));
    }
  }
}

TEST_CASE("fitted parameters are stationary points of the constrained likelihood") {
  std::mt19937_64 seed_rng(31);
  int checked = 0;
  for (int trial = 0; trial < 10 || checked < 10; ++trial) {
    REQUIRE(trial < 60);
    const Admg ag = tst::random_ancestral_graph(5, seed_rng);
    const GaussianDataset data = dataset_for(ag, 400, 4000 + trial);
    for (const CComponent& c : all_c_components(ag)) {
      if (c.district_size() < 2) continue;
      const FittedParams fit = fit_mle(c, data.covariance, data.n_samples);
      for (const auto& slot : free_slots(c, fit)) {
        const double h = 1e-5;
        const double up = loglik_at(fit, slot, h, data.covariance, data.n_samples);
        const double down = loglik_at(fit, slot, -h, data.covariance, data.n_samples);
        const double grad = (up - down) / (2 * h);
        CHECK(std::abs(grad) < 1e-4);
      }
      ++checked;
    }
  }
}

TEST_CASE("closed form matches the iterative path on lone-node districts") {
  std::mt19937_64 seed_rng(41);
  const Admg ag(4, {{0, 1}, {2, 1}, {3, 2}}, {});
  const GaussianDataset data = dataset_for(ag, 300, 555);
  RicfOptions iterative;
  iterative.force_iterative = true;
  for (const CComponent& c : all_c_components(ag)) {
    const FittedParams direct = fit_mle(c, data.covariance, data.n_samples);
    const FittedParams swept = fit_mle(c, data.covariance, data.n_samples, iterative);
    CHECK((direct.coeff - swept.coeff).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((direct.noise_cov - swept.noise_cov).cwiseAbs().maxCoeff() < 1e-8);
  }
}
