#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "multicmh/stratify.hpp"

namespace multicmh {

/// Quadrant order within a stratum row: (a, b, c, d) =
/// (left,left), (left,right), (right,left), (right,right).
struct WindowTable {
  std::size_t strata_count = 0;
  std::vector<std::array<std::int64_t, 4>> cells;

  std::int64_t total() const {
    std::int64_t s = 0;
    for (const auto& c : cells) s += c[0] + c[1] + c[2] + c[3];
    return s;
  }
};

/// Tabulates samples into a stratified 2x2xT table. `quadrant_of` maps a
/// sample index to its quadrant 0..3. Every member of every stratum must map
/// to a quadrant; empty strata produce all-zero rows.
template <typename QuadrantOf>
WindowTable tabulate(const Stratification& strat, QuadrantOf&& quadrant_of) {
  WindowTable tbl;
  tbl.strata_count = strat.T;
  tbl.cells.assign(strat.T, {0, 0, 0, 0});
  for (std::size_t t = 0; t < strat.T; ++t)
    for (std::uint32_t i : strat.strata[t].members)
      ++tbl.cells[t][quadrant_of(i)];
  return tbl;
}

}  // namespace multicmh
