#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace multicmh::sim {

/// AUROC in the Mann-Whitney form: the fraction of (alt, null) pairs with
/// p_alt < p_null, ties counted as 1/2. Smaller p-value means more alarm.
double auroc(std::span<const double> null_scores, std::span<const double> alt_scores);

/// ROC points (FPR, TPR) swept over p-value thresholds, with endpoints
/// (0,0) and (1,1).
std::vector<std::pair<double, double>> roc_points(std::span<const double> null_scores,
                                                  std::span<const double> alt_scores);

/// Empirical CDF of `values` evaluated on `grid` (both in [0,1]).
std::vector<double> ecdf_on_grid(std::span<const double> values, std::span<const double> grid);

/// Central hypergeometric pmf g0(a | b, c, d) = C(b,a) C(d-b, c-a) / C(d,c);
/// zero outside the support. Throws InputError on infeasible margins.
double hypergeom_pmf(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

/// Kolmogorov distance between the ECDF of `values` and the uniform CDF.
double ks_to_uniform(std::span<const double> values);

/// Pearson correlation; 0 when either variance vanishes.
double pearson(std::span<const double> u, std::span<const double> v);

}  // namespace multicmh::sim
