#include "multicmh/sim/generators.hpp"

#include <cmath>

namespace multicmh::sim {

double pnl_link(int which, double v) {
  switch (which) {
    case 0: return v;
    case 1: return v * v;
    case 2: return v * v * v;
    case 3: return std::tanh(v);
    default: return std::exp(-std::abs(v));
  }
}

Dataset gen_pnl(std::size_t n, std::size_t d, Hypothesis hypothesis, CounterRng& rng,
                bool force_identity) {
  const int f1 = force_identity ? 0 : static_cast<int>(rng.next_below(5));
  const int f2 = force_identity ? 0 : static_cast<int>(rng.next_below(5));
  const std::size_t d_used = d >= 2 ? d / 2 : 1;

  std::vector<double> x(n), y(n), z(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) z[i * d + j] = rng.next_normal();
    const double e1 = rng.next_normal();
    const double e2 = rng.next_normal();
    if (hypothesis == Hypothesis::null) {
      double mean = 0.0;
      for (std::size_t j = 0; j < d_used; ++j) mean += z[i * d + j];
      mean /= static_cast<double>(d_used);
      x[i] = pnl_link(f1, mean + e1);
      y[i] = pnl_link(f2, mean + e2);
    } else {
      const double e3 = rng.next_normal();
      x[i] = pnl_link(f1, 0.8 * e3 + e1);
      y[i] = pnl_link(f2, 0.8 * e3 + e2);
    }
  }
  return make_dataset(std::move(x), std::move(y), std::move(z), d);
}

Dataset gen_pure_null(std::size_t n, std::size_t d, CounterRng& rng) {
  std::vector<double> x(n), y(n), z(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.next_normal();
    y[i] = rng.next_normal();
    for (std::size_t j = 0; j < d; ++j) z[i * d + j] = rng.next_normal();
  }
  return make_dataset(std::move(x), std::move(y), std::move(z), d);
}

Dataset gen_planted_window(std::size_t n, std::size_t d, double strength, CounterRng& rng) {
  std::vector<double> x(n), y(n), z(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) z[i * d + j] = rng.next_normal();
    double u = rng.next_normal();
    double v = rng.next_normal();
    // Couple x and y only in the lower-left region of the sample space.
    if (u < 0.0 && v < 0.0) v = -std::abs(strength * u + std::sqrt(1.0 - strength * strength) * v);
    x[i] = u;
    y[i] = v;
  }
  return make_dataset(std::move(x), std::move(y), std::move(z), d);
}

}  // namespace multicmh::sim
