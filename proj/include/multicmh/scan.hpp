#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "multicmh/cmh.hpp"
#include "multicmh/dataset.hpp"
#include "multicmh/dyadic_tree.hpp"
#include "multicmh/stratify.hpp"

namespace multicmh {

struct ScanConfig {
  std::size_t eta = 10;
  int k_max = 7;
  std::size_t v_all = 20;
  std::size_t v_margin = 10;
  double alpha = 0.05;
  std::optional<std::size_t> strata_floor;       // off by default
  std::optional<std::pair<int, int>> depth_override;  // (k1, k2)
  unsigned workers = 1;
};

struct WindowResult {
  Window window;
  std::size_t n_ij = 0;
  std::size_t strata = 0;  // T_IJ, 0 when unscreened
  bool screened = false;
  std::optional<double> p_value;  // absent when unscreened
  double alpha_adj = 0.0;         // multiplicity-corrected level
  bool significant = false;
  EffectEstimate effect;  // meaningful only when screened
};

struct PartitionSummary {
  int l1 = 0;
  int l2 = 0;
  std::size_t valid_windows = 0;   // L(l1, l2)
  std::optional<double> p_value;   // partition-wise Sidak p
};

struct ResolutionSummary {
  int k = 0;
  std::size_t valid_partitions = 0;  // U(k)
  std::optional<double> p_value;     // resolution-wise Sidak p
};

struct ScanReport {
  double overall_p = 1.0;
  bool no_valid_window = false;
  int k1 = 0;  // achieved depths
  int k2 = 0;
  ScanConfig config;
  std::vector<ResolutionSummary> resolutions;  // k = 0..k1+k2-2
  std::vector<PartitionSummary> partitions;    // canonical (resolution, l1) order
  std::vector<WindowResult> windows;           // canonical order, all enumerated windows
};

/// Depth rule per continuous axis: min(k_max, max(1, ceil(log2(n/v_margin)))).
/// Binary axes get depth 1. Overrides are respected verbatim.
std::pair<int, int> choose_depths(const Dataset& dataset, const ScanConfig& config);

/// Screening rule: valid iff n_ij >= v_all and all four margins aggregated
/// over strata are >= v_margin.
bool screen(std::size_t n_ij, std::size_t row_left, std::size_t row_right,
            std::size_t col_left, std::size_t col_right, const ScanConfig& config);

/// Sidak combination 1 - (1 - min_p)^m, evaluated in log space.
double sidak_combine(double min_p, std::size_t m);

/// Multiplicity-corrected window level
/// 1 - (1 - alpha)^(1 / (resolutions_total * U_k * L_l1l2)).
double adjusted_alpha(double alpha, std::size_t resolutions_total, std::size_t u_k,
                      std::size_t l_l1l2);

/// The multiCMH driver: enumerate windows over resolutions and partitions,
/// screen, stratify per window, test, and combine through the three-stage
/// Sidak ladder. Deterministic and independent of config.workers.
ScanReport scan(const Dataset& dataset, const ScanConfig& config = {});

}  // namespace multicmh
