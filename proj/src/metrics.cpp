#include "multicmh/sim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "multicmh/dataset.hpp"

namespace multicmh::sim {

double auroc(std::span<const double> null_scores, std::span<const double> alt_scores) {
  if (null_scores.empty() || alt_scores.empty())
    throw InputError("auroc: both score lists must be non-empty");
  std::vector<double> nulls(null_scores.begin(), null_scores.end());
  std::sort(nulls.begin(), nulls.end());
  double favorable = 0.0;
  for (double a : alt_scores) {
    // count of nulls > a, plus half the ties
    auto lo = std::lower_bound(nulls.begin(), nulls.end(), a);
    auto hi = std::upper_bound(nulls.begin(), nulls.end(), a);
    favorable += static_cast<double>(nulls.end() - hi) + 0.5 * static_cast<double>(hi - lo);
  }
  return favorable /
         (static_cast<double>(null_scores.size()) * static_cast<double>(alt_scores.size()));
}

std::vector<std::pair<double, double>> roc_points(std::span<const double> null_scores,
                                                  std::span<const double> alt_scores) {
  if (null_scores.empty() || alt_scores.empty())
    throw InputError("roc_points: both score lists must be non-empty");
  std::vector<double> thresholds(null_scores.begin(), null_scores.end());
  thresholds.insert(thresholds.end(), alt_scores.begin(), alt_scores.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<double> nulls(null_scores.begin(), null_scores.end());
  std::vector<double> alts(alt_scores.begin(), alt_scores.end());
  std::sort(nulls.begin(), nulls.end());
  std::sort(alts.begin(), alts.end());

  std::vector<std::pair<double, double>> pts;
  pts.reserve(thresholds.size() + 2);
  pts.emplace_back(0.0, 0.0);
  for (double t : thresholds) {
    // reject when p <= t
    double fpr = static_cast<double>(std::upper_bound(nulls.begin(), nulls.end(), t) -
                                     nulls.begin()) /
                 static_cast<double>(nulls.size());
    double tpr = static_cast<double>(std::upper_bound(alts.begin(), alts.end(), t) -
                                     alts.begin()) /
                 static_cast<double>(alts.size());
    pts.emplace_back(fpr, tpr);
  }
  if (pts.back() != std::make_pair(1.0, 1.0)) pts.emplace_back(1.0, 1.0);
  return pts;
}

std::vector<double> ecdf_on_grid(std::span<const double> values, std::span<const double> grid) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid)
    out.push_back(static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), t) -
                                      sorted.begin()) /
                  static_cast<double>(sorted.size()));
  return out;
}

double hypergeom_pmf(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  if (d < 0 || b < 0 || c < 0 || b > d || c > d)
    throw InputError("hypergeom_pmf: infeasible margins");
  const std::int64_t lo = std::max<std::int64_t>(0, c - (d - b));
  const std::int64_t hi = std::min(b, c);
  if (lo > hi) throw InputError("hypergeom_pmf: empty support");
  if (a < lo || a > hi) return 0.0;
  auto lchoose = [](std::int64_t m, std::int64_t k) {
    return std::lgamma(static_cast<double>(m + 1)) - std::lgamma(static_cast<double>(k + 1)) -
           std::lgamma(static_cast<double>(m - k + 1));
  };
  return std::exp(lchoose(b, a) + lchoose(d - b, c - a) - lchoose(d, c));
}

double ks_to_uniform(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double v = std::min(std::max(sorted[i], 0.0), 1.0);
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - v));
    ks = std::max(ks, std::abs(v - static_cast<double>(i) / n));
  }
  return ks;
}

double pearson(std::span<const double> u, std::span<const double> v) {
  const std::size_t n = u.size();
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= static_cast<double>(n);
  mv /= static_cast<double>(n);
  double suu = 0.0, svv = 0.0, suv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double du = u[i] - mu;
    const double dv = v[i] - mv;
    suu += du * du;
    svv += dv * dv;
    suv += du * dv;
  }
  if (suu <= 0.0 || svv <= 0.0) return 0.0;
  return suv / std::sqrt(suu * svv);
}

}  // namespace multicmh::sim
