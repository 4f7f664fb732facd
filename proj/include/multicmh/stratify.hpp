#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace multicmh {

/// One stratum: a sorted index set plus its axis-aligned rank rectangle.
/// Bounds are half-open intervals (lo, hi] on the rank scale of each z
/// coordinate; coordinates never split keep the full range.
struct Stratum {
  std::vector<std::uint32_t> members;           // sorted ascending
  std::vector<std::pair<double, double>> bounds; // per coordinate, (lo, hi]
};

struct Stratification {
  std::size_t T = 0;
  std::vector<Stratum> strata;  // depth-first terminal order
  double max_diameter_diag = 0.0;  // largest stratum diagonal on the [0,1]^d rank scale
};

/// Column-major view of z ranks: cols[j][i] is the rank of sample i on
/// coordinate j. Columns beyond the split rounds actually needed may be left
/// empty by callers that materialize ranks lazily.
struct ZRanks {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::vector<std::uint32_t>> cols;
};

/// Computes ranks for the first `cols_needed` z columns of a row-major matrix.
ZRanks rank_z_columns(std::span<const double> z, std::size_t n, std::size_t d,
                      std::size_t cols_needed);

/// Stratum-count policy. Without a floor this is the per-window rule
/// T = ceil(m / eta). With a floor, T = min(max(ceil(m/eta), floor_T),
/// max(floor(m/2), 1)) so no stratum is forced empty.
std::size_t target_strata_count(std::size_t m, std::size_t eta,
                                std::optional<std::size_t> floor_T = std::nullopt);

/// Recursive median-split stratification of z into T near-equal strata.
///
/// Performs L = ceil(log2 T) rounds of splits, round t splitting every
/// current stratum on coordinate (t-1) mod d at its within-stratum median;
/// then merges the last 2*(2^L - T) terminal strata pairwise (undoing their
/// final split) to yield exactly T strata, enumerated depth-first. L and T
/// are clamped so every stratum is non-empty.
Stratification medtree(const ZRanks& z, std::span<const std::uint32_t> members,
                       std::size_t eta,
                       std::optional<std::size_t> T_override = std::nullopt,
                       std::optional<std::size_t> floor_T = std::nullopt);

}  // namespace multicmh
