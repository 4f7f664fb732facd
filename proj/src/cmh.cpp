#include "multicmh/cmh.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace multicmh {

double chi2_sf_1df(double x) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::invalid_argument("chi2_sf_1df: argument must be finite and non-negative");
  return std::erfc(std::sqrt(x * 0.5));
}

CmhResult cmh_statistic(const WindowTable& table) {
  if (table.strata_count == 0) throw std::invalid_argument("cmh_statistic: empty table");
  double deviation_sum = 0.0;
  double variance_sum = 0.0;
  std::size_t used = 0;
  for (const auto& cell : table.cells) {
    const double a = static_cast<double>(cell[0]);
    const double b = static_cast<double>(cell[1]);
    const double c = static_cast<double>(cell[2]);
    const double d = static_cast<double>(cell[3]);
    const double nt = a + b + c + d;
    if (nt <= 1.0) continue;
    const double row = a + b;   // n(I_left, J, S)
    const double col = a + c;   // n(I, J_left, S)
    const double var = row * (nt - row) * col * (nt - col) / (nt * nt * (nt - 1.0));
    if (var <= 0.0) continue;
    deviation_sum += a - row * col / nt;
    variance_sum += var;
    ++used;
  }
  CmhResult res;
  res.strata_used = used;
  if (variance_sum <= 0.0) {
    res.degenerate = true;
    res.statistic_m = 0.0;
    res.statistic_m2 = 0.0;
    res.p_value = 1.0;
    return res;
  }
  res.statistic_m = deviation_sum / std::sqrt(variance_sum);
  res.statistic_m2 = res.statistic_m * res.statistic_m;
  res.p_value = chi2_sf_1df(res.statistic_m2);
  return res;
}

MhLogOr mh_common_log_or(const WindowTable& table) {
  double num = 0.0, den = 0.0;
  for (const auto& cell : table.cells) {
    const double nt =
        static_cast<double>(cell[0] + cell[1] + cell[2] + cell[3]);
    if (nt < 1.0) continue;
    num += static_cast<double>(cell[0]) * static_cast<double>(cell[3]) / nt;
    den += static_cast<double>(cell[1]) * static_cast<double>(cell[2]) / nt;
  }
  MhLogOr out;
  if (num == 0.0 && den == 0.0) {
    out.state = OrState::undefined;
    out.value = std::numeric_limits<double>::quiet_NaN();
  } else if (den == 0.0) {
    out.state = OrState::pos_inf;
    out.value = std::numeric_limits<double>::infinity();
  } else if (num == 0.0) {
    out.state = OrState::neg_inf;
    out.value = -std::numeric_limits<double>::infinity();
  } else {
    out.value = std::log(num / den);
  }
  return out;
}

std::optional<double> mh_variance(const WindowTable& table) {
  double sum_pr = 0.0, sum_ps_qr = 0.0, sum_qs = 0.0, sum_r = 0.0, sum_s = 0.0;
  for (const auto& cell : table.cells) {
    const double a = static_cast<double>(cell[0]);
    const double b = static_cast<double>(cell[1]);
    const double c = static_cast<double>(cell[2]);
    const double d = static_cast<double>(cell[3]);
    const double nt = a + b + c + d;
    if (nt < 1.0) continue;
    const double p = (a + d) / nt;
    const double q = (b + c) / nt;
    const double r = a * d / nt;
    const double s = b * c / nt;
    sum_pr += p * r;
    sum_ps_qr += p * s + q * r;
    sum_qs += q * s;
    sum_r += r;
    sum_s += s;
  }
  if (sum_r <= 0.0 || sum_s <= 0.0) return std::nullopt;
  return sum_pr / (2.0 * sum_r * sum_r) + sum_ps_qr / (2.0 * sum_r * sum_s) +
         sum_qs / (2.0 * sum_s * sum_s);
}

double stratum_log_or(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return std::log((static_cast<double>(a) + 0.5) * (static_cast<double>(d) + 0.5) /
                  ((static_cast<double>(b) + 0.5) * (static_cast<double>(c) + 0.5)));
}

EffectEstimate effect_estimate(const WindowTable& table) {
  EffectEstimate eff;
  const MhLogOr theta = mh_common_log_or(table);
  eff.state = theta.state;
  eff.theta_hat = theta.value;
  if (theta.state == OrState::ok) {
    const auto var = mh_variance(table);
    eff.sigma_hat = var ? std::sqrt(*var) : std::numeric_limits<double>::quiet_NaN();
    eff.ci_low = eff.theta_hat - 1.96 * eff.sigma_hat;
    eff.ci_high = eff.theta_hat + 1.96 * eff.sigma_hat;
  } else {
    eff.sigma_hat = std::numeric_limits<double>::quiet_NaN();
    eff.ci_low = std::numeric_limits<double>::quiet_NaN();
    eff.ci_high = std::numeric_limits<double>::quiet_NaN();
  }
  eff.stratum_thetas.reserve(table.strata_count);
  for (const auto& cell : table.cells)
    eff.stratum_thetas.push_back(stratum_log_or(cell[0], cell[1], cell[2], cell[3]));
  return eff;
}

}  // namespace multicmh
