#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aglearn/exhaustive.hpp"
#include "aglearn/graph_io.hpp"
#include "aglearn/learn.hpp"
#include "aglearn/metrics.hpp"
#include "aglearn/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTimeout = 3;

int log_verbosity() {
  const char* env = std::getenv("AGLEARN_LOG");
  return env ? std::atoi(env) : 0;
}

struct SimulateArgs {
  int d = 4;
  int latents = 0;
  int n = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
  const aglearn::GroundTruthInstance inst =
      aglearn::make_instance(args.d, args.latents, args.n, args.seed);
  aglearn::save_instance(inst, args.d, args.latents, args.seed, args.out);
  std::cout << "wrote " << args.out << "/truth.graph, data.csv, meta.json\n";
  return kExitOk;
}

struct LearnArgs {
  std::string data;
  std::string out;
  int max_parents = 3;
  int max_district = 2;
  int district_parents = 1;
  double time_limit = 0.0;
  bool no_prune = false;
  std::uint64_t seed = 0;
  std::string save_candidates, load_candidates, include_candidates;
  std::string cut_log, export_lp;
};

nlohmann::json solve_summary(const aglearn::LearnReport& report) {
  const aglearn::SolveResult& s = report.solve;
  nlohmann::json j;
  j["schema"] = 1;
  j["score"] = s.best_score;
  j["bound"] = s.proven_bound;
  j["optimal"] = s.optimal;
  j["root_gap_percent"] = s.root_gap_percent;
  j["cuts"] = {{"cluster_integral", s.cuts_added.cluster_integral},
               {"bicluster_integral", s.cuts_added.bicluster_integral},
               {"cluster_heuristic", s.cuts_added.cluster_heuristic},
               {"bicluster_heuristic", s.cuts_added.bicluster_heuristic}};
  j["nodes_explored"] = s.nodes_explored;
  j["lp_solves"] = s.lp_solves;
  j["vars_before_pruning"] = report.vars_before;
  j["vars_after_pruning"] = report.vars_after;
  j["timings"] = {{"covariance", report.t_covariance}, {"enumerate", report.t_enumerate},
                  {"score", report.t_score},           {"prune", report.t_prune},
                  {"solve", report.t_solve},           {"total", report.t_total}};
  j["graph"] = nlohmann::json::parse(aglearn::to_graph_json(s.best_graph));
  return j;
}

int cmd_learn(const LearnArgs& args) {
  const aglearn::GaussianDataset data = aglearn::load_csv(args.data);
  aglearn::LearnOptions options;
  options.limits.max_parents_single = args.max_parents;
  options.limits.max_district = args.max_district;
  options.limits.max_parents_per_district_node = args.district_parents;
  options.prune = !args.no_prune;
  options.solver.time_limit = args.time_limit;
  options.solver.seed = args.seed;
  options.load_candidates_path = args.load_candidates;
  options.save_candidates_path = args.save_candidates;
  options.include_candidates_path = args.include_candidates;
  options.lp_export_path = args.export_lp;

  std::ofstream cut_log_stream;
  if (!args.cut_log.empty()) {
    cut_log_stream.open(args.cut_log);
    if (!cut_log_stream) throw std::runtime_error("cannot open cut log: " + args.cut_log);
    options.solver.cut_log = &cut_log_stream;
  }
  if (log_verbosity() >= 1) options.solver.log = &std::cerr;

  const aglearn::LearnReport report = aglearn::run_learn(data, options);
  const nlohmann::json summary = solve_summary(report);
  std::cout << summary.dump(2) << "\n";
  if (!args.out.empty()) {
    aglearn::save_graph(report.solve.best_graph, args.out + ".graph");
    std::ofstream js(args.out + ".json");
    if (!js) throw std::runtime_error("cannot open for writing: " + args.out + ".json");
    js << summary.dump(2) << "\n";
  }
  return report.solve.hit_time_limit ? kExitTimeout : kExitOk;
}

int cmd_score(const std::string& data_path, const std::string& graph_path) {
  const aglearn::GaussianDataset data = aglearn::load_csv(data_path);
  const aglearn::Admg g = aglearn::load_graph(graph_path);
  if (g.node_count() != data.dim())
    throw std::runtime_error("graph node count does not match data columns");
  if (const auto cycle = aglearn::find_directed_cycle(g)) {
    std::cerr << "graph is not ancestral: directed cycle";
    for (int v : *cycle) std::cerr << " " << v;
    std::cerr << "\n";
    return kExitRuntime;
  }
  if (const auto almost = aglearn::find_almost_directed_cycle(g)) {
    std::cerr << "graph is not ancestral: directed path";
    for (int v : almost->path) std::cerr << " " << v;
    std::cerr << " with bidirected edge " << almost->bidirected.first << " <-> "
              << almost->bidirected.second << "\n";
    return kExitRuntime;
  }
  nlohmann::json breakdown = nlohmann::json::array();
  double total = 0.0;
  for (const aglearn::CComponent& c : aglearn::all_c_components(g)) {
    const double score = aglearn::local_bic(c, data.covariance, data.n_samples);
    total += score;
    nlohmann::json item;
    item["district"] = aglearn::set_to_vector(c.district);
    item["score"] = score;
    breakdown.push_back(item);
  }
  nlohmann::json j;
  j["bic"] = total;
  j["components"] = breakdown;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& pred_path, const std::string& truth_path,
                 const std::string& out_path) {
  const aglearn::Admg pred = aglearn::load_graph(pred_path);
  const aglearn::Admg truth = aglearn::load_graph(truth_path);
  const auto [precision, recall] = aglearn::precision_recall(pred, truth);
  nlohmann::json j;
  j["shd"] = aglearn::shd(pred, truth);
  j["precision"] = precision;
  j["recall"] = recall;
  std::cout << j.dump(2) << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_oracle(const std::string& data_path, int max_nodes, const std::string& out_path) {
  const aglearn::GaussianDataset data = aglearn::load_csv(data_path);
  if (data.dim() > max_nodes)
    throw std::runtime_error("exhaustive search capped at " + std::to_string(max_nodes) +
                             " nodes; got " + std::to_string(data.dim()));
  const aglearn::ExhaustiveResult result = aglearn::exhaustive_search(data);
  nlohmann::json j;
  j["score"] = result.best_score;
  j["graphs_scored"] = result.graphs_scored;
  j["graph"] = nlohmann::json::parse(aglearn::to_graph_json(result.best_graph));
  std::cout << j.dump(2) << "\n";
  if (!out_path.empty()) aglearn::save_graph(result.best_graph, out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact score-based structure learning of ancestral graphs from Gaussian data"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "generate a ground-truth instance bundle");
  simulate->add_option("--d", sim.d, "observed variables")->required();
  simulate->add_option("--latents", sim.latents, "latent variables marginalized out");
  simulate->add_option("--n", sim.n, "sample count");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--out", sim.out, "output directory")->required();

  LearnArgs learn;
  CLI::App* learn_cmd = app.add_subcommand("learn", "learn an ancestral graph from CSV data");
  learn_cmd->add_option("--data", learn.data, "CSV file")->required();
  learn_cmd->add_option("--out", learn.out, "output prefix (.graph/.json)");
  learn_cmd->add_option("--max-parents", learn.max_parents, "parent cap, single-node districts");
  learn_cmd->add_option("--max-district", learn.max_district, "largest district size");
  learn_cmd->add_option("--district-parents", learn.district_parents,
                        "per-node parent cap in multi-node districts");
  learn_cmd->add_option("--time-limit", learn.time_limit, "seconds; 0 = none");
  learn_cmd->add_flag("--no-prune", learn.no_prune, "skip candidate pruning");
  learn_cmd->add_option("--seed", learn.seed, "RNG seed for separation restarts");
  learn_cmd->add_option("--save-candidates", learn.save_candidates, "write scored pool");
  learn_cmd->add_option("--load-candidates", learn.load_candidates, "reuse a scored pool");
  learn_cmd->add_option("--include-candidates", learn.include_candidates,
                        "extra components to add to the pool");
  learn_cmd->add_option("--cut-log", learn.cut_log, "write one line per emitted cut");
  learn_cmd->add_option("--export-lp", learn.export_lp, "dump the root model as an LP file");

  std::string score_data, score_graph;
  CLI::App* score_cmd = app.add_subcommand("score", "BIC of a given graph on data");
  score_cmd->add_option("--data", score_data, "CSV file")->required();
  score_cmd->add_option("--graph", score_graph, "graph file")->required();

  std::string eval_pred, eval_truth, eval_out;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "SHD/precision/recall against a truth graph");
  eval_cmd->add_option("--pred", eval_pred, "predicted graph")->required();
  eval_cmd->add_option("--truth", eval_truth, "ground-truth graph")->required();
  eval_cmd->add_option("--out", eval_out, "also write metrics JSON here");

  std::string oracle_data, oracle_out;
  int oracle_max_nodes = 4;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "exhaustive-enumeration optimum (small graphs)");
  oracle_cmd->add_option("--data", oracle_data, "CSV file")->required();
  oracle_cmd->add_option("--max-nodes", oracle_max_nodes, "refuse larger inputs");
  oracle_cmd->add_option("--out", oracle_out, "write the optimal graph here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (learn_cmd->parsed()) return cmd_learn(learn);
    if (score_cmd->parsed()) return cmd_score(score_data, score_graph);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_pred, eval_truth, eval_out);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_data, oracle_max_nodes, oracle_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
