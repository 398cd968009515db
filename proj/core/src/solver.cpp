#include "aglearn/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace aglearn {

namespace {

constexpr double kIntTol = 1e-7;

using Clock = std::chrono::steady_clock;

struct SolveContext {
  const SolverConfig* config = nullptr;
  LpBackend* backend = nullptr;
  Clock::time_point start;
  long lp_solves = 0;
  CutCounts cuts;
  bool out_of_time = false;

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
  bool time_up() const {
    return config->time_limit > 0 && elapsed() >= config->time_limit;
  }
};

bool is_integral(const std::vector<double>& z) {
  for (double v : z)
    if (std::min(v, 1.0 - v) > kIntTol) return false;
  return true;
}

void log_cut(const SolverConfig& config, const CutRow& row, const std::vector<double>& z) {
  if (!config.cut_log) return;
  *config.cut_log << (row.kind == CutKind::Cluster ? "cluster" : "bicluster") << " S={";
  bool first = true;
  for_each_node(row.subset, [&](int i) {
    *config.cut_log << (first ? "" : ",") << i;
    first = false;
  });
  *config.cut_log << "}";
  if (row.kind == CutKind::Bicluster) *config.cut_log << " pair=(" << row.i << "," << row.j << ")";
  *config.cut_log << " violation=" << evaluate_row(row, z) << "\n";
}

// Top bidirected pairs by indicator mass at z, largest first.
std::vector<std::pair<int, int>> ranked_pairs(const std::vector<double>& z,
                                              const std::vector<ScoredCandidate>& vars,
                                              int max_pairs) {
  struct Entry {
    double mass;
    std::pair<int, int> pair;
  };
  std::vector<Entry> entries;
  std::vector<std::pair<std::pair<int, int>, double>> acc;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (z[v] <= 1e-9) continue;
    for (auto e : vars[v].component.bidirected) {
      auto it = std::find_if(acc.begin(), acc.end(), [&](const auto& p) { return p.first == e; });
      if (it == acc.end())
        acc.emplace_back(e, z[v]);
      else
        it->second += z[v];
    }
  }
  for (const auto& [pair, mass] : acc)
    if (mass > 1e-9) entries.push_back({mass, pair});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.pair < b.pair;
  });
  std::vector<std::pair<int, int>> out;
  for (std::size_t k = 0; k < entries.size() && static_cast<int>(k) < max_pairs; ++k)
    out.push_back(entries[k].pair);
  return out;
}

CutLoopResult run_cut_loop(IpModel& model, const std::vector<VarFix>& fixings, int max_rounds,
                           SolveContext& ctx) {
  const SolverConfig& config = *ctx.config;
  CutLoopResult result;
  int heuristic_rounds = 0;
  while (true) {
    result.solution = ctx.backend->solve(model, fixings);
    ++ctx.lp_solves;
    if (result.solution.status == LpStatus::Infeasible) return result;
    if (ctx.time_up()) {
      ctx.out_of_time = true;
      result.integral = is_integral(result.solution.values);
      return result;
    }

    const std::vector<double>& z = result.solution.values;
    if (is_integral(z)) {
      std::vector<CutRow> cuts = separate_integral(z, model.variables, model.node_count);
      if (cuts.empty()) {
        result.integral = true;
        result.ancestral = true;
        return result;
      }
      for (CutRow& row : cuts) {
        log_cut(config, row, z);
        if (row.kind == CutKind::Cluster)
          ++ctx.cuts.cluster_integral;
        else
          ++ctx.cuts.bicluster_integral;
        if (model.add_cut(std::move(row))) ++result.cuts_added;
      }
      continue;  // integral rounds are free; each cut kills this point for good
    }

    if (max_rounds >= 0 && heuristic_rounds >= max_rounds) return result;
    ++heuristic_rounds;

    const std::uint64_t seed =
        derive_seed(config.seed, static_cast<std::uint64_t>(model.node_count),
                    static_cast<std::uint64_t>(ctx.lp_solves));
    int added = 0;
    for (CutRow& row : separate_cluster_heuristic(z, model.variables, model.node_count,
                                                  config.restarts, seed)) {
      log_cut(config, row, z);
      ++ctx.cuts.cluster_heuristic;
      if (model.add_cut(std::move(row))) ++added;
    }
    for (auto pair : ranked_pairs(z, model.variables, config.max_bicluster_pairs)) {
      for (CutRow& row : separate_bicluster_heuristic(z, model.variables, model.node_count, pair,
                                                      config.restarts, seed)) {
        log_cut(config, row, z);
        if (row.kind == CutKind::Cluster)
          ++ctx.cuts.cluster_heuristic;
        else
          ++ctx.cuts.bicluster_heuristic;
        if (model.add_cut(std::move(row))) ++added;
      }
    }
    if (added == 0) return result;  // fractional and no cut found: caller branches
    result.cuts_added += added;
  }
}

Admg graph_of(const IpModel& model, const std::vector<double>& z) {
  std::vector<CComponent> selected;
  for (std::size_t v = 0; v < model.variables.size(); ++v)
    if (z[v] > 0.5) selected.push_back(model.variables[v].component);
  return assemble(selected, model.node_count);
}

struct SearchNode {
  std::vector<VarFix> fixings;
  double parent_bound = std::numeric_limits<double>::infinity();
  long id = 0;
};

struct NodeOrder {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.parent_bound != b.parent_bound) return a.parent_bound < b.parent_bound;
    return a.id > b.id;  // older nodes first among equal bounds
  }
};

}  // namespace

CutLoopResult cutting_plane_loop(IpModel& model, const std::vector<VarFix>& fixings,
                                 int max_rounds, const SolverConfig& config, LpBackend& backend) {
  SolveContext ctx;
  ctx.config = &config;
  ctx.backend = &backend;
  ctx.start = Clock::now();
  return run_cut_loop(model, fixings, max_rounds, ctx);
}

SolveResult branch_and_cut(IpModel& model, const SolverConfig& config, LpBackend* backend) {
  std::unique_ptr<LpBackend> owned;
  if (!backend) {
    owned = make_default_lp_backend();
    backend = owned.get();
  }
  SolveContext ctx;
  ctx.config = &config;
  ctx.backend = backend;
  ctx.start = Clock::now();

  SolveResult result;
  result.best_graph = Admg(model.node_count);

  // Baseline incumbent: the empty-component selection, when present.
  {
    std::vector<int> lone(static_cast<std::size_t>(model.node_count), -1);
    for (std::size_t v = 0; v < model.variables.size(); ++v) {
      const CComponent& c = model.variables[v].component;
      if (c.district_size() == 1 && c.parents.front() == 0)
        lone[static_cast<std::size_t>(lowest_node(c.district))] = static_cast<int>(v);
    }
    if (std::all_of(lone.begin(), lone.end(), [](int v) { return v >= 0; })) {
      double score = 0.0;
      for (int v : lone) score += model.variables[static_cast<std::size_t>(v)].score;
      result.best_score = score;
    }
  }

  std::priority_queue<SearchNode, std::vector<SearchNode>, NodeOrder> queue;
  long next_id = 0;
  queue.push({std::vector<VarFix>(model.variables.size(), VarFix{-1}),
              std::numeric_limits<double>::infinity(), next_id++});

  double open_bound_on_stop = -std::numeric_limits<double>::infinity();

  while (!queue.empty()) {
    if (ctx.time_up()) {
      ctx.out_of_time = true;
      open_bound_on_stop = std::max(open_bound_on_stop, queue.top().parent_bound);
      break;
    }
    SearchNode node = queue.top();
    queue.pop();
    if (node.parent_bound <= result.best_score + config.gap_tol) {
      // Best-first order: every remaining node is at least as weak.
      open_bound_on_stop = std::max(open_bound_on_stop, node.parent_bound);
      break;
    }
    ++result.nodes_explored;

    const bool root = node.id == 0;
    CutLoopResult loop =
        run_cut_loop(model, node.fixings, root ? -1 : config.max_cut_rounds, ctx);
    if (ctx.out_of_time) {
      open_bound_on_stop = std::max(open_bound_on_stop, node.parent_bound);
      break;
    }
    if (loop.solution.status == LpStatus::Infeasible) {
      if (root) result.root_bound = -std::numeric_limits<double>::infinity();
      continue;
    }
    const double bound = loop.solution.objective;
    if (root) result.root_bound = bound;

    if (config.log)
      *config.log << "node " << node.id << " bound=" << bound
                  << " incumbent=" << result.best_score << " cuts=" << ctx.cuts.total()
                  << " open=" << queue.size() << "\n";

    if (bound <= result.best_score + config.gap_tol) {
      open_bound_on_stop = std::max(open_bound_on_stop, bound);
      continue;
    }

    if (loop.ancestral) {
      Admg g = graph_of(model, loop.solution.values);
      if (bound > result.best_score) {
        result.best_score = bound;
        result.best_graph = std::move(g);
        if (config.log)
          *config.log << "node " << node.id << " new incumbent " << bound << "\n";
      }
      continue;
    }

    // Fractional with no cut found: branch on the most fractional variable,
    // ties by larger objective coefficient, then lower index.
    int branch_var = -1;
    double best_frac = -1.0;
    for (std::size_t v = 0; v < loop.solution.values.size(); ++v) {
      if (node.fixings[v] >= 0) continue;
      const double value = loop.solution.values[v];
      const double frac = std::min(value, 1.0 - value);
      if (frac <= kIntTol) continue;
      bool take = frac > best_frac + 1e-12;
      if (!take && frac > best_frac - 1e-12 && branch_var >= 0)
        take = model.variables[v].score >
               model.variables[static_cast<std::size_t>(branch_var)].score;
      if (take) {
        best_frac = std::max(best_frac, frac);
        branch_var = static_cast<int>(v);
      }
    }
    if (branch_var < 0)
      throw std::runtime_error("internal error: no fractional variable to branch on");
    for (VarFix fix : {VarFix{1}, VarFix{0}}) {
      SearchNode child;
      child.fixings = node.fixings;
      child.fixings[static_cast<std::size_t>(branch_var)] = fix;
      child.parent_bound = bound;
      child.id = next_id++;
      queue.push(std::move(child));
    }
  }

  result.lp_solves = ctx.lp_solves;
  result.cuts_added = ctx.cuts;
  result.hit_time_limit = ctx.out_of_time;
  result.optimal = !ctx.out_of_time;
  result.proven_bound = std::max(result.best_score, open_bound_on_stop);
  if (ctx.out_of_time) {
    // Everything still open keeps its parent bound valid.
    std::priority_queue<SearchNode, std::vector<SearchNode>, NodeOrder> rest;
    rest.swap(queue);
    while (!rest.empty()) {
      result.proven_bound = std::max(result.proven_bound, rest.top().parent_bound);
      rest.pop();
    }
  }
  if (std::isfinite(result.root_bound) && std::isfinite(result.best_score)) {
    const double denom = std::max(std::abs(result.best_score), 1e-12);
    result.root_gap_percent = 100.0 * (result.root_bound - result.best_score) / denom;
  }
  result.wall_time = ctx.elapsed();

  if (std::isfinite(result.best_score) && result.best_graph.node_count() > 0 &&
      !is_ancestral(result.best_graph))
    throw std::runtime_error("internal error: best graph is not ancestral");
  return result;
}

}  // namespace aglearn
