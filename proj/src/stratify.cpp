#include "multicmh/stratify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "multicmh/dataset.hpp"

namespace multicmh {

ZRanks rank_z_columns(std::span<const double> z, std::size_t n, std::size_t d,
                      std::size_t cols_needed) {
  ZRanks out;
  out.n = n;
  out.d = d;
  out.cols.resize(d);
  if (cols_needed > d) cols_needed = d;
  std::vector<double> col(n);
  for (std::size_t j = 0; j < cols_needed; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = z[i * d + j];
    out.cols[j] = rank_transform(col);
  }
  return out;
}

std::size_t target_strata_count(std::size_t m, std::size_t eta,
                                std::optional<std::size_t> floor_T) {
  std::size_t t = (m + eta - 1) / eta;
  if (floor_T) {
    std::size_t cap = std::max<std::size_t>(m / 2, 1);
    t = std::min(std::max(t, *floor_T), cap);
  }
  return std::max<std::size_t>(t, 1);
}

namespace {

int floor_log2(std::size_t v) { return std::bit_width(v) - 1; }

int ceil_log2(std::size_t v) { return v <= 1 ? 0 : std::bit_width(v - 1); }

}  // namespace

Stratification medtree(const ZRanks& z, std::span<const std::uint32_t> members,
                       std::size_t eta, std::optional<std::size_t> T_override,
                       std::optional<std::size_t> floor_T) {
  const std::size_t m = members.size();
  const std::size_t d = z.d;
  std::size_t T = T_override ? std::max<std::size_t>(*T_override, 1)
                             : target_strata_count(m, eta, floor_T);
  T = std::min(T, m);
  int rounds = std::min(ceil_log2(T), floor_log2(std::max<std::size_t>(m, 1)));
  T = std::min(T, std::size_t{1} << rounds);

  const double full_hi = static_cast<double>(z.n);
  std::vector<Stratum> strata(1);
  strata[0].members.assign(members.begin(), members.end());
  if (!std::is_sorted(strata[0].members.begin(), strata[0].members.end()))
    std::sort(strata[0].members.begin(), strata[0].members.end());
  strata[0].bounds.assign(d, {0.0, full_hi});

  std::vector<int> split_coord;  // coordinate used in each round
  for (int t = 1; t <= rounds; ++t) {
    std::size_t j = static_cast<std::size_t>(t - 1) % d;
    split_coord.push_back(static_cast<int>(j));
    const auto& rank_j = z.cols[j];
    if (rank_j.empty()) throw std::logic_error("medtree: z ranks for coordinate not materialized");
    std::vector<Stratum> next;
    next.reserve(strata.size() * 2);
    for (auto& s : strata) {
      // Ranks are distinct, so the median split is unambiguous; a selection
      // suffices because only the membership of each half matters.
      std::size_t sz = s.members.size();
      std::size_t left_n = (sz + 1) / 2;
      std::nth_element(s.members.begin(), s.members.begin() + (left_n - 1), s.members.end(),
                       [&](std::uint32_t a, std::uint32_t b) { return rank_j[a] < rank_j[b]; });
      double cut = static_cast<double>(rank_j[s.members[left_n - 1]]);
      Stratum left, right;
      left.members.assign(s.members.begin(), s.members.begin() + left_n);
      right.members.assign(s.members.begin() + left_n, s.members.end());
      left.bounds = s.bounds;
      right.bounds = std::move(s.bounds);
      left.bounds[j].second = cut;
      right.bounds[j].first = cut;
      next.push_back(std::move(left));
      next.push_back(std::move(right));
    }
    strata = std::move(next);
  }

  // Undo the final split of the last terminal pairs to reach exactly T.
  std::size_t leaves = strata.size();
  std::size_t merges = leaves - T;
  Stratification out;
  out.strata.reserve(T);
  std::size_t keep = leaves - 2 * merges;
  for (std::size_t i = 0; i < keep; ++i) out.strata.push_back(std::move(strata[i]));
  int last_coord = split_coord.empty() ? 0 : split_coord.back();
  for (std::size_t i = 0; i < merges; ++i) {
    Stratum& a = strata[keep + 2 * i];
    Stratum& b = strata[keep + 2 * i + 1];
    a.members.insert(a.members.end(), b.members.begin(), b.members.end());
    a.bounds[last_coord].second = b.bounds[last_coord].second;
    out.strata.push_back(std::move(a));
  }
  for (auto& s : out.strata) std::sort(s.members.begin(), s.members.end());
  out.T = out.strata.size();

  double max_diag2 = 0.0;
  const double scale = full_hi > 0 ? 1.0 / full_hi : 1.0;
  for (const auto& s : out.strata) {
    double diag2 = 0.0;
    for (const auto& [lo, hi] : s.bounds) {
      double w = (hi - lo) * scale;
      diag2 += w * w;
    }
    max_diag2 = std::max(max_diag2, diag2);
  }
  out.max_diameter_diag = std::sqrt(max_diag2);
  return out;
}

}  // namespace multicmh
