#pragma once

#include <iosfwd>
#include <unordered_set>
#include <vector>

#include "aglearn/ricf.hpp"

namespace aglearn {

enum class CutKind { Cluster, Bicluster };

/// One valid inequality over the candidate variables, stored as
/// sum(coeff_v * z_v) >= rhs with coefficients in {-1, 0, 1}. Cluster rows
/// have rhs 1; a variable participates once when some district node inside S
/// keeps its parents outside S. Bicluster rows carry the indicator sum for
/// the bidirected pair on the left with sign -1 and have rhs 0; variables
/// appearing on both sides are cancelled.
struct CutRow {
  CutKind kind = CutKind::Cluster;
  NodeSet subset = 0;                         // the set S
  int i = -1, j = -1;                         // bicluster pair, i < j
  std::vector<std::pair<int, double>> coeffs; // (variable id, coefficient), sorted
  double rhs = 0.0;

  std::string signature() const;
};

/// value of LHS - RHS at z; negative means violated.
double evaluate_row(const CutRow& row, const std::vector<double>& z);

/// The integer program over a candidate pool: maximize sum(score_v * z_v)
/// subject to one partition equality per node and the accumulated cut rows.
struct IpModel {
  int node_count = 0;
  std::vector<ScoredCandidate> variables;      // index = variable id
  std::vector<std::vector<int>> vars_by_node;  // partition row support per node
  std::vector<CutRow> cut_rows;

  /// Adds the row unless an identical one is already present.
  bool add_cut(CutRow row);

  std::unordered_set<std::string> row_signatures;
};

/// Builds the model from the active candidates. Throws std::invalid_argument
/// if some node is covered by no candidate.
IpModel build_model(const std::vector<ScoredCandidate>& cands, int d);

/// Strengthened cluster inequality for S (|S| >= 2):
///   sum over i in S, C with i in D_C and W_{C,i} disjoint from S of z_C >= 1.
CutRow cluster_cut(NodeSet subset, const std::vector<ScoredCandidate>& vars);

/// Strengthened bicluster inequality for S and pair (i, j), i < j, both in S,
/// with the indicator sum I(i<->j) moved to the left-hand side and variables
/// on both sides cancelled.
CutRow bicluster_cut(NodeSet subset, int i, int j, const std::vector<ScoredCandidate>& vars);

/// Text export of the model (objective, partition rows, cut rows, bounds) in
/// the common LP file format, for cross-checking against external solvers.
void write_lp_file(const IpModel& model, std::ostream& out);
void write_lp_file(const IpModel& model, const std::string& path);

}  // namespace aglearn
