#pragma once

#include <cstdint>
#include <vector>

#include "multicmh/scan.hpp"
#include "multicmh/sim/rng.hpp"

namespace multicmh {
struct Dataset;
}

namespace multicmh::sim {

/// Stratified permutation oracle for the conditional null.
///
/// A single z-only stratification (medtree over all rows) is fixed up front
/// and shared by every window, standing in for the common refinement of the
/// per-window stratifications. Each resample permutes the y values uniformly
/// within every stratum, which preserves all stratum-specific row and column
/// margins of every window, then retabulates every window and recomputes its
/// CMH p-value. Intended for small n.
class PermutationOracle {
 public:
  PermutationOracle(const Dataset& dataset, const ScanConfig& config);

  std::size_t window_count() const { return windows_.size(); }
  const std::vector<Window>& windows() const { return windows_; }
  std::size_t strata_count() const { return strat_.T; }

  /// p-values of every window under the identity assignment.
  std::vector<double> observed_pvalues() const;
  /// M^2 statistics of every window under the identity assignment.
  std::vector<double> observed_m2() const;

  /// resamples x windows matrix of p-values under the conditional null.
  std::vector<std::vector<double>> resample_pvalues(std::size_t resamples, CounterRng& rng) const;

  /// Same resampling scheme, collecting M^2 instead of p.
  std::vector<std::vector<double>> resample_m2(std::size_t resamples, CounterRng& rng) const;

  /// a-cell counts of window w per resample (used against hypergeom_pmf).
  std::vector<std::int64_t> resample_a_cell(std::size_t w, std::size_t resamples,
                                            CounterRng& rng) const;

 private:
  template <typename Sink>
  void run_resamples(std::size_t resamples, CounterRng& rng, Sink&& sink) const;

  void compute_windows(const std::vector<std::uint32_t>& ypos, std::vector<double>* pvals,
                       std::vector<double>* m2, std::vector<std::int64_t>* a_cells) const;

  std::size_t n_ = 0;
  int k1_ = 0, k2_ = 0;
  std::vector<std::vector<std::uint32_t>> xnode_;  // [level][sample]
  std::vector<std::vector<std::uint32_t>> ypos2node_;  // [level][rank position]
  std::vector<std::uint32_t> ypos_;  // identity assignment: rank position per sample
  std::vector<Window> windows_;      // screened windows only
  Stratification strat_;             // shared z stratification
};

}  // namespace multicmh::sim
