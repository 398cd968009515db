#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace aglearn {

/// Set of node indices packed into a 64-bit mask. Graphs in this library are
/// small (the solver targets a few dozen variables), so node indices are
/// required to lie in [0, 64).
using NodeSet = std::uint64_t;

constexpr int kMaxNodes = 64;

constexpr NodeSet node_bit(int i) { return NodeSet{1} << i; }

constexpr bool contains(NodeSet s, int i) { return (s >> i) & 1; }

constexpr NodeSet with_node(NodeSet s, int i) { return s | node_bit(i); }

constexpr NodeSet without_node(NodeSet s, int i) { return s & ~node_bit(i); }

constexpr int set_size(NodeSet s) { return std::popcount(s); }

constexpr NodeSet full_set(int d) {
  return d >= kMaxNodes ? ~NodeSet{0} : (NodeSet{1} << d) - 1;
}

constexpr int lowest_node(NodeSet s) { return std::countr_zero(s); }

inline std::vector<int> set_to_vector(NodeSet s) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(set_size(s)));
  while (s != 0) {
    const int i = std::countr_zero(s);
    out.push_back(i);
    s &= s - 1;
  }
  return out;
}

inline NodeSet set_from_vector(const std::vector<int>& nodes) {
  NodeSet s = 0;
  for (int i : nodes) s |= node_bit(i);
  return s;
}

/// Calls fn(i) for every node in s, in ascending order.
template <typename Fn>
void for_each_node(NodeSet s, Fn&& fn) {
  while (s != 0) {
    fn(std::countr_zero(s));
    s &= s - 1;
  }
}

}  // namespace aglearn
