#include "aglearn/ip_model.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace aglearn {

std::string CutRow::signature() const {
  std::ostringstream out;
  out << (kind == CutKind::Cluster ? "c" : "b") << rhs << ":";
  for (auto [var, coeff] : coeffs) out << var << "*" << coeff << ",";
  return out.str();
}

double evaluate_row(const CutRow& row, const std::vector<double>& z) {
  double lhs = 0.0;
  for (auto [var, coeff] : row.coeffs) lhs += coeff * z[static_cast<std::size_t>(var)];
  return lhs - row.rhs;
}

bool IpModel::add_cut(CutRow row) {
  if (!row_signatures.insert(row.signature()).second) return false;
  cut_rows.push_back(std::move(row));
  return true;
}

IpModel build_model(const std::vector<ScoredCandidate>& cands, int d) {
  IpModel model;
  model.node_count = d;
  model.variables = cands;
  model.vars_by_node.assign(static_cast<std::size_t>(d), {});
  for (std::size_t v = 0; v < cands.size(); ++v)
    for_each_node(cands[v].component.district, [&](int i) {
      model.vars_by_node[static_cast<std::size_t>(i)].push_back(static_cast<int>(v));
    });
  for (int i = 0; i < d; ++i)
    if (model.vars_by_node[static_cast<std::size_t>(i)].empty())
      throw std::invalid_argument("node " + std::to_string(i) + " is covered by no candidate");
  return model;
}

CutRow cluster_cut(NodeSet subset, const std::vector<ScoredCandidate>& vars) {
  CutRow row;
  row.kind = CutKind::Cluster;
  row.subset = subset;
  row.rhs = 1.0;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const CComponent& c = vars[v].component;
    if ((c.district & subset) == 0) continue;
    // A variable counts once when some district node inside S keeps all its
    // parents outside S. Counting with multiplicity instead would stay valid
    // but strictly weakens the inequality: a two-node district fully inside S
    // would need only half its mass to reach the right-hand side, and the
    // resulting relaxations cannot be tightened below that point.
    bool qualifies = false;
    const std::vector<int> dnodes = c.district_nodes();
    for (std::size_t k = 0; k < dnodes.size() && !qualifies; ++k)
      qualifies = contains(subset, dnodes[k]) && (c.parents[k] & subset) == 0;
    if (qualifies) row.coeffs.emplace_back(static_cast<int>(v), 1.0);
  }
  return row;
}

CutRow bicluster_cut(NodeSet subset, int i, int j, const std::vector<ScoredCandidate>& vars) {
  if (i >= j) throw std::invalid_argument("bicluster pair must satisfy i < j");
  if (!contains(subset, i) || !contains(subset, j))
    throw std::invalid_argument("bicluster pair must lie inside S");
  CutRow row;
  row.kind = CutKind::Bicluster;
  row.subset = subset;
  row.i = i;
  row.j = j;
  row.rhs = 0.0;
  const NodeSet pair_set = node_bit(i) | node_bit(j);
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const CComponent& c = vars[v].component;
    const bool has_edge =
        std::find(c.bidirected.begin(), c.bidirected.end(), std::make_pair(i, j)) !=
        c.bidirected.end();

    int coeff = 0;
    if (has_edge &&
        ((c.parent_set_of(i) | c.parent_set_of(j)) & subset) == 0)
      coeff = 1;  // membership via the pair itself
    if (coeff == 0) {
      // Membership via some other district node of C inside S with parents
      // outside S. Components containing the pair in the district without the
      // bidirected edge are left out: the partition rows already force them
      // to zero whenever the right-hand side is positive.
      const NodeSet overlap = c.district & pair_set;
      const bool eligible = overlap == 0 || (overlap == pair_set && has_edge);
      if (eligible) {
        const std::vector<int> dnodes = c.district_nodes();
        for (std::size_t k = 0; k < dnodes.size() && coeff == 0; ++k) {
          const int v_node = dnodes[k];
          if (v_node == i || v_node == j) continue;
          if (contains(subset, v_node) && (c.parents[k] & subset) == 0) coeff = 1;
        }
      }
    }
    if (has_edge) coeff -= 1;  // I(i <-> j) moved to the left-hand side
    if (coeff != 0) row.coeffs.emplace_back(static_cast<int>(v), static_cast<double>(coeff));
  }
  return row;
}

void write_lp_file(const IpModel& model, std::ostream& out) {
  char buf[40];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "\\ aglearn model: " << model.variables.size() << " variables, "
      << model.node_count << " partition rows, " << model.cut_rows.size() << " cut rows\n";
  out << "Maximize\n obj:";
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    const double s = model.variables[v].score;
    out << (s < 0 ? " - " : " + ") << num(std::abs(s)) << " z" << v;
    if ((v + 1) % 8 == 0) out << "\n     ";
  }
  out << "\nSubject To\n";
  for (int i = 0; i < model.node_count; ++i) {
    out << " part_" << i << ":";
    for (int v : model.vars_by_node[static_cast<std::size_t>(i)]) out << " + z" << v;
    out << " = 1\n";
  }
  for (std::size_t r = 0; r < model.cut_rows.size(); ++r) {
    const CutRow& row = model.cut_rows[r];
    out << " cut_" << r << ":";
    for (auto [var, coeff] : row.coeffs)
      out << (coeff < 0 ? " - " : " + ") << num(std::abs(coeff)) << " z" << var;
    out << " >= " << num(row.rhs) << "\n";
  }
  out << "Bounds\n";
  for (std::size_t v = 0; v < model.variables.size(); ++v) out << " 0 <= z" << v << " <= 1\n";
  out << "End\n";
}

void write_lp_file(const IpModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_lp_file(model, out);
}

}  // namespace aglearn
