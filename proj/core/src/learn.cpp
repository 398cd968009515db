#include "aglearn/learn.hpp"

#include <chrono>
#include <stdexcept>

#include "aglearn/ip_model.hpp"

namespace aglearn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

LearnReport run_learn(const GaussianDataset& data, const LearnOptions& options) {
  LearnReport report;
  const auto t_start = Clock::now();
  const int d = data.dim();

  auto t = Clock::now();
  // The dataset arrives with its covariance computed; re-validate that it is
  // usable for fitting.
  if (data.covariance.rows() != d || data.n_samples < 3)
    throw std::invalid_argument("dataset needs at least 3 samples and a square covariance");
  report.t_covariance = seconds_since(t);

  std::vector<ScoredCandidate> pool;
  if (!options.load_candidates_path.empty()) {
    int cached_d = 0;
    pool = load_candidates(options.load_candidates_path, &cached_d);
    if (cached_d != d)
      throw std::invalid_argument("candidate cache node count does not match the data");
    for (ScoredCandidate& sc : pool) sc.status = CandidateStatus::Active;
  } else {
    t = Clock::now();
    std::vector<CComponent> structures = enumerate_candidates(d, options.limits);
    if (!options.include_candidates_path.empty()) {
      for (CComponent& extra : load_candidate_structures(options.include_candidates_path)) {
        extra.validate(d);
        structures.push_back(std::move(extra));
      }
    }
    report.t_enumerate = seconds_since(t);

    t = Clock::now();
    pool = score_candidates(structures, data.covariance, data.n_samples);
    report.t_score = seconds_since(t);
  }
  report.vars_before = pool.size();

  if (options.prune) {
    t = Clock::now();
    prune_candidates(pool, options.limits);
    report.t_prune = seconds_since(t);
  }
  if (!options.save_candidates_path.empty()) save_candidates(pool, d, options.save_candidates_path);

  const std::vector<ScoredCandidate> active = active_candidates(pool);
  report.vars_after = active.size();

  IpModel model = build_model(active, d);
  if (!options.lp_export_path.empty()) write_lp_file(model, options.lp_export_path);

  t = Clock::now();
  report.solve = branch_and_cut(model, options.solver);
  report.t_solve = seconds_since(t);
  report.t_total = seconds_since(t_start);
  return report;
}

}  // namespace aglearn
