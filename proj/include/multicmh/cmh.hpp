#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "multicmh/table.hpp"

namespace multicmh {

struct CmhResult {
  double statistic_m = 0.0;    // signed M
  double statistic_m2 = 0.0;   // M^2
  double p_value = 1.0;
  std::size_t strata_used = 0; // strata contributing nonzero variance
  bool degenerate = false;     // all strata inert

  bool reject_at(double alpha) const { return p_value <= alpha; }
};

enum class OrState {
  ok,
  pos_inf,    // denominator aggregate is zero
  neg_inf,    // numerator aggregate is zero
  undefined,  // both aggregates zero
};

struct EffectEstimate {
  OrState state = OrState::ok;
  double theta_hat = 0.0;  // common log odds ratio
  double sigma_hat = 0.0;  // its standard error
  double ci_low = 0.0;     // theta_hat +- 1.96 * sigma_hat
  double ci_high = 0.0;
  std::vector<double> stratum_thetas;  // continuity-corrected, always finite
};

/// Survival function of chi-squared with 1 df: erfc(sqrt(x/2)).
/// Absolute error <= 1e-12 on [0, 100]; monotone non-increasing.
double chi2_sf_1df(double x);

/// CMH statistic on a 2x2xT table. Strata with n_t <= 1 or zero variance are
/// excluded from both sums; a fully degenerate table yields M = 0, p = 1.
CmhResult cmh_statistic(const WindowTable& table);

struct MhLogOr {
  OrState state = OrState::ok;
  double value = 0.0;  // +-inf or NaN when state != ok
};

/// theta_hat = log(sum_t a_t d_t / n_t  /  sum_t b_t c_t / n_t).
/// Strata with n_t = 0 are skipped.
MhLogOr mh_common_log_or(const WindowTable& table);

/// Robust (sparse-data) variance of the MH common log odds ratio. Undefined
/// (nullopt) when either aggregate sum is zero; reduces to 1/a+1/b+1/c+1/d on
/// an all-positive single stratum.
std::optional<double> mh_variance(const WindowTable& table);

/// Mantel-Haenszel common log odds ratio with its sparse-data standard error
/// and 95% confidence interval, plus per-stratum continuity-corrected log
/// odds ratios. A zero aggregate numerator or denominator produces the
/// corresponding sentinel state with non-finite theta.
EffectEstimate effect_estimate(const WindowTable& table);

/// log((a+0.5)(d+0.5) / ((b+0.5)(c+0.5))); always finite.
double stratum_log_or(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

}  // namespace multicmh
