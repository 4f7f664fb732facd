#include "multicmh/dyadic_tree.hpp"

#include <algorithm>
#include <numeric>

namespace multicmh {

namespace {

void fill_node_of(DyadicTree& tree) {
  const std::size_t n = tree.order.size();
  tree.node_of.assign(tree.levels.size(), std::vector<std::uint32_t>(n));
  for (std::size_t l = 0; l < tree.levels.size(); ++l) {
    const auto& nodes = tree.levels[l];
    for (std::uint32_t p = 0; p < nodes.size(); ++p)
      for (std::uint32_t r = nodes[p].lo; r < nodes[p].hi; ++r)
        tree.node_of[l][tree.order[r]] = p;
  }
}

}  // namespace

DyadicTree build_dyadic_tree_from_ranks(std::span<const std::uint32_t> ranks, int depth) {
  const std::size_t n = ranks.size();
  DyadicTree tree;
  tree.order.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) tree.order[ranks[i] - 1] = i;

  tree.levels.push_back({TreeNode{0, static_cast<std::uint32_t>(n), 0, false}});
  for (int l = 0; l < depth; ++l) {
    auto& parents = tree.levels[l];
    // Stop deepening once any node is too small to split.
    bool splittable = std::all_of(parents.begin(), parents.end(),
                                  [](const TreeNode& nd) { return nd.size() >= 2; });
    if (!splittable) break;
    std::vector<TreeNode> children;
    children.reserve(parents.size() * 2);
    for (auto& p : parents) {
      std::uint32_t m = p.size();
      std::uint32_t cut = p.lo + (m + 1) / 2;  // left child gets ceil(m/2)
      p.has_children = true;
      p.cut = cut;
      children.push_back(TreeNode{p.lo, cut, 0, false});
      children.push_back(TreeNode{cut, p.hi, 0, false});
    }
    tree.levels.push_back(std::move(children));
  }
  tree.depth = static_cast<int>(tree.levels.size()) - 1;
  fill_node_of(tree);
  return tree;
}

DyadicTree build_dyadic_tree(std::span<const double> values, int depth) {
  return build_dyadic_tree_from_ranks(rank_transform(values), depth);
}

DyadicTree build_binary_tree(std::span<const double> values) {
  const std::size_t n = values.size();
  const double lo_value = *std::min_element(values.begin(), values.end());
  std::uint32_t lo_count = 0;
  for (double v : values)
    if (v == lo_value) ++lo_count;

  DyadicTree tree;
  tree.order.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i)
    if (values[i] == lo_value) tree.order.push_back(i);
  for (std::uint32_t i = 0; i < n; ++i)
    if (values[i] != lo_value) tree.order.push_back(i);

  tree.levels.push_back({TreeNode{0, static_cast<std::uint32_t>(n), 0, false}});
  if (lo_count < n) {  // two observed values
    auto& root = tree.levels[0][0];
    root.has_children = true;
    root.cut = lo_count;
    tree.levels.push_back(
        {TreeNode{0, lo_count, 0, false}, TreeNode{lo_count, static_cast<std::uint32_t>(n), 0, false}});
  }
  tree.depth = static_cast<int>(tree.levels.size()) - 1;
  fill_node_of(tree);
  return tree;
}

}  // namespace multicmh
