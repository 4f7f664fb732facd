#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "multicmh/scan.hpp"
#include "multicmh/sim/generators.hpp"

namespace multicmh::sim {

enum class Scenario { null_pnl, alt_pnl, pure_null_gaussian, planted_window };

struct SimSpec {
  Scenario scenario = Scenario::null_pnl;
  std::size_t n = 200;
  std::size_t d = 2;
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  ScanConfig scan;
  std::vector<std::size_t> eta_sweep = {5, 10, 15, 20};
  std::vector<std::size_t> n_grid;   // scaling sizes; defaults filled by run_scaling
  std::size_t timing_repeats = 5;
};

struct MetricsBundle {
  double rejection_rate = 0.0;
  std::vector<double> ecdf_grid;    // t values
  std::vector<double> ecdf_values;  // ECDF(t)
  std::vector<std::pair<double, double>> roc;  // (FPR, TPR)
  double auroc = 0.5;
  std::vector<double> pvalues_null;
  std::vector<double> pvalues_alt;
  std::vector<std::pair<std::size_t, double>> runtimes;  // (n, median seconds)
  std::uint64_t seed = 0;
  std::size_t eta = 0;  // set by the eta sweep
};

Dataset generate(const SimSpec& spec, Hypothesis hypothesis, std::uint64_t replication);

/// Overall p-values of `spec.replications` scans under the given hypothesis,
/// replications seeded independently and reduced in index order.
std::vector<double> collect_pvalues(const SimSpec& spec, Hypothesis hypothesis);

/// Null-only calibration: rejection rate at alpha and the p-value ECDF.
MetricsBundle run_t1e(const SimSpec& spec);

/// Null + alternative replications; ROC points and AUROC over p-values.
MetricsBundle run_roc(const SimSpec& spec);

/// Median scan runtime per sample size in spec.n_grid (pure-null data;
/// generation excluded from the timing).
MetricsBundle run_scaling(const SimSpec& spec);

/// run_roc (plus run_t1e when requested) for each eta in spec.eta_sweep.
std::vector<MetricsBundle> run_eta_sweep(const SimSpec& spec, bool with_t1e = false);

}  // namespace multicmh::sim
