#include "aglearn/lp.hpp"

#include <Eigen/Dense>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aglearn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum : std::int8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

struct Simplex {
  // Structural columns: the z variables followed by one surplus column per
  // cut row. Artificial columns are implicit: id n + r is the artificial of
  // row r with single entry art_sign[r].
  int m = 0;
  int n = 0;
  int n_z = 0;
  std::vector<std::vector<std::pair<int, double>>> cols;
  std::vector<double> b;
  std::vector<double> lower, upper;  // structural bounds
  std::vector<double> cost;          // phase-2 objective
  SimplexBackend::Options opt;

  std::vector<int> basis;          // per row: column id (>= n means artificial)
  std::vector<std::int8_t> stat;   // structural status
  std::vector<double> x;           // structural values (authoritative when nonbasic)
  std::vector<double> xb;          // basic values per row
  std::vector<double> art_sign;
  double art_upper = kInf;         // shrinks to 0 in phase 2
  Eigen::MatrixXd binv;
  int phase = 1;
  long pivots = 0;
  long pivots_since_refactor = 0;

  double lb(int j) const { return j < n ? lower[static_cast<std::size_t>(j)] : 0.0; }
  double ub(int j) const { return j < n ? upper[static_cast<std::size_t>(j)] : art_upper; }
  double phase_cost(int j) const {
    if (phase == 1) return j >= n ? -1.0 : 0.0;
    return j < n ? cost[static_cast<std::size_t>(j)] : 0.0;
  }

  Eigen::VectorXd column_times_binv(int j) const {  // w = Binv * A_j
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    if (j >= n) {
      w = binv.col(j - n) * art_sign[static_cast<std::size_t>(j - n)];
    } else {
      for (auto [r, a] : cols[static_cast<std::size_t>(j)]) w += a * binv.col(r);
    }
    return w;
  }

  double sparse_dot(int j, const Eigen::VectorXd& y) const {
    if (j >= n) return y(j - n) * art_sign[static_cast<std::size_t>(j - n)];
    double s = 0.0;
    for (auto [r, a] : cols[static_cast<std::size_t>(j)]) s += a * y(r);
    return s;
  }

  void refactor() {
    Eigen::MatrixXd basis_mat = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) {
      const int j = basis[static_cast<std::size_t>(k)];
      if (j >= n)
        basis_mat(j - n, k) = art_sign[static_cast<std::size_t>(j - n)];
      else
        for (auto [r, a] : cols[static_cast<std::size_t>(j)]) basis_mat(r, k) = a;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_mat);
    if (!lu.isInvertible()) throw std::runtime_error("LP basis became singular");
    binv = lu.inverse();
    if (!binv.allFinite()) throw std::runtime_error("LP basis became singular");
    pivots_since_refactor = 0;
    recompute_basics();
  }

  void recompute_basics() {
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), m);
    for (int j = 0; j < n; ++j) {
      if (stat[static_cast<std::size_t>(j)] == kBasic) continue;
      const double v = x[static_cast<std::size_t>(j)];
      if (v == 0.0) continue;
      for (auto [r, a] : cols[static_cast<std::size_t>(j)]) rhs(r) -= a * v;
    }
    const Eigen::VectorXd result = binv * rhs;
    for (int k = 0; k < m; ++k) xb[static_cast<std::size_t>(k)] = result(k);
  }

  // Runs the current phase to optimality.
  void run_phase() {
    const long bland_after = 4L * (m + n) + 200;
    const long max_iters = 400L * (m + n) + 100000;
    bool fresh = false;  // binv was recomputed since the last pivot attempt
    for (long iter = 0; iter < max_iters; ++iter) {
      if (pivots_since_refactor >= opt.refactor_every) {
        refactor();
        fresh = true;
      }
      const bool bland = iter > bland_after;

      Eigen::VectorXd cb(m);
      for (int k = 0; k < m; ++k) cb(k) = phase_cost(basis[static_cast<std::size_t>(k)]);
      const Eigen::VectorXd y = binv.transpose() * cb;

      int enter = -1;
      double best = opt.opt_tol;
      bool from_lower = true;
      for (int j = 0; j < n; ++j) {
        const std::int8_t st = stat[static_cast<std::size_t>(j)];
        if (st == kBasic) continue;
        if (lb(j) == ub(j)) continue;  // fixed, cannot move
        const double dj = phase_cost(j) - sparse_dot(j, y);
        const bool eligible = (st == kAtLower && dj > opt.opt_tol) ||
                              (st == kAtUpper && dj < -opt.opt_tol);
        if (!eligible) continue;
        if (bland) {
          enter = j;
          from_lower = st == kAtLower;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          enter = j;
          from_lower = st == kAtLower;
        }
      }
      if (enter < 0) return;  // phase optimal

      const Eigen::VectorXd w = column_times_binv(enter);
      const double dir = from_lower ? 1.0 : -1.0;  // delta x_enter = dir * theta

      double theta = ub(enter) - lb(enter);  // bound-flip span
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int k = 0; k < m; ++k) {
        const double rate = -dir * w(k);  // d(x_basic[k]) / d(theta)
        if (std::abs(rate) <= 1e-9) continue;  // noise-level entries never pivot
        const int jb = basis[static_cast<std::size_t>(k)];
        double limit;
        bool to_upper;
        if (rate > 0) {
          const double u = ub(jb);
          if (u == kInf) continue;
          limit = (u - xb[static_cast<std::size_t>(k)]) / rate;
          to_upper = true;
        } else {
          limit = (xb[static_cast<std::size_t>(k)] - lb(jb)) / (-rate);
          to_upper = false;
        }
        limit = std::max(limit, 0.0);
        bool take = false;
        if (limit < theta - 1e-12) {
          take = true;  // strictly tighter than the current blocker
        } else if (leave_row >= 0 && limit < theta + 1e-12) {
          take = bland ? jb < basis[static_cast<std::size_t>(leave_row)]
                       : std::abs(w(k)) > std::abs(w(leave_row));
        }
        if (take) {
          theta = std::min(theta, limit);
          leave_row = k;
          leave_to_upper = to_upper;
        }
      }
      if (theta == kInf) throw std::runtime_error("LP relaxation is unbounded");

      // A small pivot element on a stale inverse is untrustworthy: rebuild
      // the factorization and re-run the iteration before committing.
      if (leave_row >= 0 && std::abs(w(leave_row)) < 1e-7 && !fresh) {
        refactor();
        fresh = true;
        continue;
      }

      // Apply the move to the basic values.
      for (int k = 0; k < m; ++k) xb[static_cast<std::size_t>(k)] += -dir * theta * w(k);

      if (leave_row < 0) {
        // Bound flip: the entering variable crossed to its other bound.
        stat[static_cast<std::size_t>(enter)] = from_lower ? kAtUpper : kAtLower;
        x[static_cast<std::size_t>(enter)] = from_lower ? ub(enter) : lb(enter);
        fresh = false;
        continue;
      }

      const int leaving = basis[static_cast<std::size_t>(leave_row)];
      if (leaving < n) {
        stat[static_cast<std::size_t>(leaving)] = leave_to_upper ? kAtUpper : kAtLower;
        x[static_cast<std::size_t>(leaving)] = leave_to_upper ? ub(leaving) : lb(leaving);
      }
      basis[static_cast<std::size_t>(leave_row)] = enter;
      if (enter < n) stat[static_cast<std::size_t>(enter)] = kBasic;
      xb[static_cast<std::size_t>(leave_row)] =
          (from_lower ? lb(enter) : ub(enter)) + dir * theta;

      // Eta update of the basis inverse.
      const double pivot = w(leave_row);
      binv.row(leave_row) /= pivot;
      for (int k = 0; k < m; ++k) {
        if (k == leave_row) continue;
        const double factor = w(k);
        if (factor != 0.0) binv.row(k) -= factor * binv.row(leave_row);
      }
      ++pivots;
      ++pivots_since_refactor;
      fresh = false;
    }
    throw std::runtime_error("simplex iteration limit exceeded");
  }
};

}  // namespace

LpSolution SimplexBackend::solve(const IpModel& model, const std::vector<VarFix>& fixings) {
  const int n_z = static_cast<int>(model.variables.size());
  const int n_cuts = static_cast<int>(model.cut_rows.size());
  if (!fixings.empty() && static_cast<int>(fixings.size()) != n_z)
    throw std::invalid_argument("fixings size does not match variable count");

  Simplex s;
  s.opt = options_;
  s.m = model.node_count + n_cuts;
  s.n_z = n_z;
  s.n = n_z + n_cuts;
  s.cols.assign(static_cast<std::size_t>(s.n), {});
  s.b.assign(static_cast<std::size_t>(s.m), 0.0);
  s.lower.assign(static_cast<std::size_t>(s.n), 0.0);
  s.upper.assign(static_cast<std::size_t>(s.n), 1.0);
  s.cost.assign(static_cast<std::size_t>(s.n), 0.0);

  for (int i = 0; i < model.node_count; ++i) s.b[static_cast<std::size_t>(i)] = 1.0;
  for (int v = 0; v < n_z; ++v) {
    s.cost[static_cast<std::size_t>(v)] = model.variables[static_cast<std::size_t>(v)].score;
    for_each_node(model.variables[static_cast<std::size_t>(v)].component.district,
                  [&](int i) { s.cols[static_cast<std::size_t>(v)].emplace_back(i, 1.0); });
    if (!fixings.empty() && fixings[static_cast<std::size_t>(v)] >= 0) {
      const double fixed = fixings[static_cast<std::size_t>(v)];
      s.lower[static_cast<std::size_t>(v)] = fixed;
      s.upper[static_cast<std::size_t>(v)] = fixed;
    }
  }
  for (int r = 0; r < n_cuts; ++r) {
    const CutRow& row = model.cut_rows[static_cast<std::size_t>(r)];
    const int row_index = model.node_count + r;
    for (auto [var, coeff] : row.coeffs)
      s.cols[static_cast<std::size_t>(var)].emplace_back(row_index, coeff);
    const int surplus = n_z + r;
    s.cols[static_cast<std::size_t>(surplus)].emplace_back(row_index, -1.0);
    s.upper[static_cast<std::size_t>(surplus)] = kInf;
    s.b[static_cast<std::size_t>(row_index)] = row.rhs;
  }

  // Start all structural variables at their lower bounds; artificials absorb
  // the row residuals with a sign making them nonnegative.
  s.stat.assign(static_cast<std::size_t>(s.n), kAtLower);
  s.x.assign(static_cast<std::size_t>(s.n), 0.0);
  for (int j = 0; j < s.n; ++j) s.x[static_cast<std::size_t>(j)] = s.lower[static_cast<std::size_t>(j)];

  std::vector<double> residual = s.b;
  for (int j = 0; j < s.n; ++j) {
    const double v = s.x[static_cast<std::size_t>(j)];
    if (v == 0.0) continue;
    for (auto [r, a] : s.cols[static_cast<std::size_t>(j)]) residual[static_cast<std::size_t>(r)] -= a * v;
  }
  s.basis.resize(static_cast<std::size_t>(s.m));
  s.art_sign.assign(static_cast<std::size_t>(s.m), 1.0);
  s.xb.assign(static_cast<std::size_t>(s.m), 0.0);
  s.binv = Eigen::MatrixXd::Zero(s.m, s.m);
  for (int r = 0; r < s.m; ++r) {
    s.art_sign[static_cast<std::size_t>(r)] = residual[static_cast<std::size_t>(r)] < 0 ? -1.0 : 1.0;
    s.basis[static_cast<std::size_t>(r)] = s.n + r;
    s.xb[static_cast<std::size_t>(r)] = std::abs(residual[static_cast<std::size_t>(r)]);
    s.binv(r, r) = s.art_sign[static_cast<std::size_t>(r)];
  }

  s.phase = 1;
  s.run_phase();
  double infeasibility = 0.0;
  for (int k = 0; k < s.m; ++k)
    if (s.basis[static_cast<std::size_t>(k)] >= s.n)
      infeasibility += std::max(0.0, s.xb[static_cast<std::size_t>(k)]);
  if (infeasibility > 1e-7) {
    LpSolution out;
    out.status = LpStatus::Infeasible;
    return out;
  }

  s.phase = 2;
  s.art_upper = 0.0;  // basic artificials may remain, pinned at zero
  s.run_phase();

  LpSolution out;
  out.status = LpStatus::Optimal;
  out.values.assign(static_cast<std::size_t>(n_z), 0.0);
  for (int k = 0; k < s.m; ++k) {
    const int j = s.basis[static_cast<std::size_t>(k)];
    if (j < s.n) s.x[static_cast<std::size_t>(j)] = s.xb[static_cast<std::size_t>(k)];
  }
  double obj = 0.0;
  for (int v = 0; v < n_z; ++v) {
    double value = s.x[static_cast<std::size_t>(v)];
    value = std::min(1.0, std::max(0.0, value));
    out.values[static_cast<std::size_t>(v)] = value;
    obj += s.cost[static_cast<std::size_t>(v)] * value;
  }
  out.objective = obj;
  return out;
}

std::unique_ptr<LpBackend> make_default_lp_backend() { return std::make_unique<SimplexBackend>(); }

}  // namespace aglearn
