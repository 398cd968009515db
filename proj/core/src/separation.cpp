#include "aglearn/separation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "aglearn/admg.hpp"

namespace aglearn {

namespace {

constexpr double kViolationTol = 1e-7;
constexpr double kWeightTol = 1e-12;

void check_partition(const std::vector<double>& z, const std::vector<ScoredCandidate>& vars,
                     int d) {
  std::vector<double> mass(static_cast<std::size_t>(d), 0.0);
  for (std::size_t v = 0; v < vars.size(); ++v)
    for_each_node(vars[v].component.district,
                  [&](int i) { mass[static_cast<std::size_t>(i)] += z[v]; });
  for (int i = 0; i < d; ++i)
    if (std::abs(mass[static_cast<std::size_t>(i)] - 1.0) > 1e-6)
      throw std::invalid_argument("assignment violates the partition row of node " +
                                  std::to_string(i));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose, std::uint64_t index) {
  // splitmix64 over the mixed key
  std::uint64_t x = master ^ (purpose * 0x9e3779b97f4a7c15ULL) ^ (index + 0x632be59bd9b4e019ULL);
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<CutRow> separate_integral(const std::vector<double>& z,
                                      const std::vector<ScoredCandidate>& vars, int d) {
  check_partition(z, vars, d);
  std::vector<CComponent> selected;
  for (std::size_t v = 0; v < vars.size(); ++v)
    if (z[v] > 0.5) selected.push_back(vars[v].component);
  const Admg g = assemble(selected, d);

  std::vector<CutRow> cuts;
  if (const auto cycle = find_directed_cycle(g)) {
    CutRow row = cluster_cut(set_from_vector(*cycle), vars);
    if (evaluate_row(row, z) < -kViolationTol) cuts.push_back(std::move(row));
  }
  if (const auto almost = find_almost_directed_cycle(g)) {
    const auto [a, b] = almost->bidirected;
    CutRow row = bicluster_cut(set_from_vector(almost->path), std::min(a, b), std::max(a, b), vars);
    if (evaluate_row(row, z) < -kViolationTol) cuts.push_back(std::move(row));
  }
  return cuts;
}

double bidirected_mass(const std::vector<double>& z, const std::vector<ScoredCandidate>& vars,
                       int i, int j) {
  const std::pair<int, int> key{std::min(i, j), std::max(i, j)};
  double mass = 0.0;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const auto& e = vars[v].component.bidirected;
    if (std::find(e.begin(), e.end(), key) != e.end()) mass += z[v];
  }
  return mass;
}

ContractionState ContractionState::make_cluster(const std::vector<double>& z,
                                                const std::vector<ScoredCandidate>& vars, int d) {
  ContractionState st;
  st.d_ = d;
  st.alive_ = full_set(d);
  st.underlying_.resize(static_cast<std::size_t>(d));
  st.mu_.assign(static_cast<std::size_t>(d), 1.0);
  for (int i = 0; i < d; ++i) st.underlying_[static_cast<std::size_t>(i)] = node_bit(i);
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (z[v] <= kWeightTol) continue;
    LiveVar lv;
    lv.var = static_cast<int>(v);
    lv.z = z[v];
    lv.district = vars[v].component.district;
    const std::vector<int> dnodes = vars[v].component.district_nodes();
    for (std::size_t k = 0; k < dnodes.size(); ++k)
      lv.parents.emplace_back(dnodes[k], vars[v].component.parents[k]);
    st.live_.push_back(std::move(lv));
  }
  st.recompute_weights();
  return st;
}

ContractionState ContractionState::make_bicluster(const std::vector<double>& z,
                                                  const std::vector<ScoredCandidate>& vars, int d,
                                                  int i, int j) {
  if (i > j) std::swap(i, j);
  ContractionState st;
  st.d_ = d;
  st.alive_ = without_node(full_set(d), j);
  st.underlying_.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) st.underlying_[static_cast<std::size_t>(k)] = node_bit(k);
  st.underlying_[static_cast<std::size_t>(i)] = node_bit(i) | node_bit(j);

  const NodeSet pair_set = node_bit(i) | node_bit(j);
  auto relabel = [&](NodeSet s) {
    if (contains(s, j)) s = with_node(without_node(s, j), i);
    return s;
  };
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (z[v] <= kWeightTol) continue;
    const CComponent& c = vars[v].component;
    if (set_size(c.district & pair_set) == 1) continue;  // contradicts the pair
    LiveVar lv;
    lv.var = static_cast<int>(v);
    lv.z = z[v];
    lv.district = relabel(c.district);
    const std::vector<int> dnodes = c.district_nodes();
    NodeSet merged_parents = 0;
    for (std::size_t k = 0; k < dnodes.size(); ++k) {
      const int node = dnodes[k];
      if (node == i || node == j) {
        merged_parents |= relabel(c.parents[k]);
      } else {
        lv.parents.emplace_back(node, relabel(c.parents[k]));
      }
    }
    if ((c.district & pair_set) != 0) lv.parents.emplace_back(i, merged_parents);
    std::sort(lv.parents.begin(), lv.parents.end());
    st.live_.push_back(std::move(lv));
  }

  st.mu_.assign(static_cast<std::size_t>(d), 0.0);
  for (const LiveVar& lv : st.live_)
    for_each_node(lv.district, [&](int p) { st.mu_[static_cast<std::size_t>(p)] += lv.z; });
  st.recompute_weights();
  return st;
}

double ContractionState::weight(int a, int b) const {
  return weights_[static_cast<std::size_t>(a) * static_cast<std::size_t>(d_) +
                  static_cast<std::size_t>(b)];
}

void ContractionState::recompute_weights() {
  weights_.assign(static_cast<std::size_t>(d_) * static_cast<std::size_t>(d_), 0.0);
  auto add = [&](int a, int b, double w) {
    weights_[static_cast<std::size_t>(a) * static_cast<std::size_t>(d_) + static_cast<std::size_t>(b)] += w;
    weights_[static_cast<std::size_t>(b) * static_cast<std::size_t>(d_) + static_cast<std::size_t>(a)] += w;
  };
  for (const LiveVar& lv : live_) {
    for (const auto& [p, w] : lv.parents)
      for_each_node(w, [&](int q) { add(p, q, lv.z); });
    // district pairs where neither side parents the other
    const std::vector<int> dnodes = set_to_vector(lv.district);
    for (std::size_t a = 0; a < dnodes.size(); ++a)
      for (std::size_t b = a + 1; b < dnodes.size(); ++b) {
        NodeSet wa = 0, wb = 0;
        for (const auto& [p, w] : lv.parents) {
          if (p == dnodes[a]) wa = w;
          if (p == dnodes[b]) wb = w;
        }
        if (!contains(wa, dnodes[b]) && !contains(wb, dnodes[a])) add(dnodes[a], dnodes[b], lv.z);
      }
  }
}

double ContractionState::direct_mu(NodeSet labels) const {
  double total = 0.0;
  for (const LiveVar& lv : live_) {
    if ((lv.district & labels) == 0) continue;
    for (const auto& [p, w] : lv.parents) {
      if (contains(labels, p) && (w & labels) == 0) {
        total += lv.z;
        break;
      }
    }
  }
  return total;
}

int ContractionState::contract(int a, int b) {
  if (a > b) std::swap(a, b);
  if (!contains(alive_, a) || !contains(alive_, b) || a == b)
    throw std::invalid_argument("contracting a dead or identical pseudonode pair");

  mu_[static_cast<std::size_t>(a)] =
      mu_[static_cast<std::size_t>(a)] + mu_[static_cast<std::size_t>(b)] - weight(a, b);

  std::vector<LiveVar> survivors;
  survivors.reserve(live_.size());
  for (LiveVar& lv : live_) {
    bool drop = false;
    for (const auto& [p, w] : lv.parents) {
      if ((p == a && contains(w, b)) || (p == b && contains(w, a))) {
        drop = true;
        break;
      }
    }
    if (drop) continue;

    if (contains(lv.district, b)) lv.district = with_node(without_node(lv.district, b), a);
    NodeSet merged = 0;
    bool has_merge = false;
    std::vector<std::pair<int, NodeSet>> kept;
    for (auto& [p, w] : lv.parents) {
      if (contains(w, b)) w = with_node(without_node(w, b), a);
      if (p == a || p == b) {
        merged |= w;
        has_merge = true;
      } else {
        kept.emplace_back(p, w);
      }
    }
    if (has_merge) kept.emplace_back(a, merged);
    std::sort(kept.begin(), kept.end());
    lv.parents = std::move(kept);
    survivors.push_back(std::move(lv));
  }
  live_ = std::move(survivors);
  underlying_[static_cast<std::size_t>(a)] |= underlying_[static_cast<std::size_t>(b)];
  alive_ = without_node(alive_, b);
  recompute_weights();
  return a;
}

ContractionState initial_weights(const std::vector<double>& z,
                                 const std::vector<ScoredCandidate>& vars, int d) {
  check_partition(z, vars, d);
  return ContractionState::make_cluster(z, vars, d);
}

namespace {

// One contraction pass; stops at the first pseudonode whose mass drops below
// its threshold and hands the underlying set to emit(). Returns true when a
// verified cut was produced.
template <typename PickThreshold, typename Emit>
bool run_contraction(ContractionState state, std::mt19937_64& rng, PickThreshold threshold_of,
                     Emit&& emit) {
  while (state.pseudonode_count() > 1) {
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> weights;
    const std::vector<int> labels = set_to_vector(state.alive());
    for (std::size_t x = 0; x < labels.size(); ++x)
      for (std::size_t y = x + 1; y < labels.size(); ++y) {
        const double w = state.weight(labels[x], labels[y]);
        if (w > kWeightTol) {
          pairs.emplace_back(labels[x], labels[y]);
          weights.push_back(w);
        }
      }
    if (pairs.empty()) return false;  // contraction stalls, restart ends

    double total = 0.0;
    for (double w : weights) total += w;
    double draw = std::uniform_real_distribution<double>(0.0, total)(rng);
    std::size_t pick = 0;
    for (; pick + 1 < weights.size(); ++pick) {
      draw -= weights[pick];
      if (draw <= 0.0) break;
    }

    const int merged = state.contract(pairs[pick].first, pairs[pick].second);
    if (state.mu(merged) < threshold_of(state, merged) - kViolationTol)
      return emit(state.underlying(merged));
  }
  return false;
}

}  // namespace

std::vector<CutRow> separate_cluster_heuristic(const std::vector<double>& z,
                                               const std::vector<ScoredCandidate>& vars, int d,
                                               int restarts, std::uint64_t seed) {
  const ContractionState initial = initial_weights(z, vars, d);
  std::vector<CutRow> cuts;
  std::unordered_set<std::string> seen;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, 0x63677573ULL, static_cast<std::uint64_t>(r)));
    run_contraction(
        initial, rng, [](const ContractionState&, int) { return 1.0; },
        [&](NodeSet subset) {
          CutRow row = cluster_cut(subset, vars);
          if (evaluate_row(row, z) >= -kViolationTol) return false;  // not genuinely violated
          if (seen.insert(row.signature()).second) cuts.push_back(std::move(row));
          return true;
        });
  }
  return cuts;
}

std::vector<CutRow> separate_bicluster_heuristic(const std::vector<double>& z,
                                                 const std::vector<ScoredCandidate>& vars, int d,
                                                 std::pair<int, int> pair, int restarts,
                                                 std::uint64_t seed) {
  const int i = std::min(pair.first, pair.second);
  const int j = std::max(pair.first, pair.second);
  const double indicator = bidirected_mass(z, vars, i, j);
  if (indicator <= 0.0)
    throw std::invalid_argument("bicluster separation needs positive mass on the pair");
  check_partition(z, vars, d);

  const ContractionState initial = ContractionState::make_bicluster(z, vars, d, i, j);
  std::vector<CutRow> cuts;
  std::unordered_set<std::string> seen;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, 0x62696375ULL,
                                    (static_cast<std::uint64_t>(i) << 32) ^
                                        (static_cast<std::uint64_t>(j) << 16) ^
                                        static_cast<std::uint64_t>(r)));
    run_contraction(
        initial, rng,
        [&](const ContractionState& st, int label) {
          return contains(st.underlying(label), i) ? indicator : 1.0;
        },
        [&](NodeSet subset) {
          CutRow row;
          if (contains(subset, i) && contains(subset, j))
            row = bicluster_cut(subset, i, j, vars);
          else
            row = cluster_cut(subset, vars);
          if (evaluate_row(row, z) >= -kViolationTol) return false;
          if (seen.insert(row.signature()).second) cuts.push_back(std::move(row));
          return true;
        });
  }
  return cuts;
}

}  // namespace aglearn
