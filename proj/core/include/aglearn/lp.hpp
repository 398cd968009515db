#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "aglearn/ip_model.hpp"

namespace aglearn {

enum class LpStatus { Optimal, Infeasible };

struct LpSolution {
  std::vector<double> values;  // one entry per model variable, in [0, 1]
  double objective = 0.0;
  LpStatus status = LpStatus::Optimal;
};

/// Per-variable fixing: -1 free, 0 fixed to zero, 1 fixed to one.
using VarFix = std::int8_t;

/// Relaxation oracle behind the branch-and-cut loop. The default backend is
/// the embedded simplex below; an external LP engine can be swapped in by
/// implementing this interface.
class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual LpSolution solve(const IpModel& model, const std::vector<VarFix>& fixings) = 0;
};

/// Bounded-variable primal simplex on a dense basis inverse, two-phase, with
/// Dantzig pricing and a Bland's-rule fallback for anti-cycling.
class SimplexBackend final : public LpBackend {
 public:
  struct Options {
    double feas_tol = 1e-9;
    double opt_tol = 1e-9;
    int refactor_every = 64;
  };

  SimplexBackend() = default;
  explicit SimplexBackend(Options options) : options_(options) {}

  LpSolution solve(const IpModel& model, const std::vector<VarFix>& fixings) override;

 private:
  Options options_;
};

std::unique_ptr<LpBackend> make_default_lp_backend();

}  // namespace aglearn
