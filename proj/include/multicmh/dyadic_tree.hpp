#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multicmh/dataset.hpp"

namespace multicmh {

/// One node of a dyadic tree: a contiguous slice [lo, hi) of the rank order.
struct TreeNode {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;  // half-open
  std::uint32_t cut = 0; // rank position of the median split; lo == cut when leaf
  bool has_children = false;

  std::uint32_t size() const { return hi - lo; }
};

/// Nested median-split interval tree over one variable's ranks.
///
/// Level l holds 2^l nodes in left-to-right order. Node positions are dense:
/// the children of node p at level l are nodes 2p and 2p+1 at level l+1.
/// `order` lists sample indices sorted by rank, so a node's member set is
/// order[lo..hi). `node_of[l][i]` gives the level-l node position of sample i.
struct DyadicTree {
  int depth = 0;  // achieved depth (may be less than requested)
  std::vector<std::uint32_t> order;
  std::vector<std::vector<TreeNode>> levels;        // levels[l], l = 0..depth
  std::vector<std::vector<std::uint32_t>> node_of;  // node_of[l][sample]

  const TreeNode& node(int level, std::uint32_t pos) const { return levels[level][pos]; }

  /// Members of a node, as rank-ordered sample indices.
  std::span<const std::uint32_t> members(int level, std::uint32_t pos) const {
    const TreeNode& nd = levels[level][pos];
    return std::span<const std::uint32_t>(order).subspan(nd.lo, nd.hi - nd.lo);
  }
};

/// Recursive median splits down to depth k. The left child of an m-sample
/// node receives the first ceil(m/2) rank-ordered samples. Depth is clamped:
/// nodes with fewer than 2 samples are never split, and the achieved depth is
/// the deepest level at which every node could be split.
DyadicTree build_dyadic_tree(std::span<const double> values, int depth);

/// Same, from precomputed ranks (1..n, all distinct).
DyadicTree build_dyadic_tree_from_ranks(std::span<const std::uint32_t> ranks, int depth);

/// Depth-1 tree for a binary column: left child holds the smaller observed
/// value, right child the larger. A constant column yields a depth-0 tree.
DyadicTree build_binary_tree(std::span<const double> values);

/// A scanning window: the product of an X-tree node at level l1 and a Y-tree
/// node at level l2, both of which must have children. Its four quadrants are
/// the child pairs (I_left, I_right) x (J_left, J_right).
struct Window {
  int l1 = 0;
  int l2 = 0;
  std::uint32_t pos_i = 0;
  std::uint32_t pos_j = 0;
};

}  // namespace multicmh
