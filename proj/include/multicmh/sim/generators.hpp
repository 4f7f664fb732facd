#pragma once

#include <cstdint>

#include "multicmh/dataset.hpp"
#include "multicmh/sim/rng.hpp"

namespace multicmh::sim {

enum class Hypothesis { null, alt };

/// The five link functions drawn for the post-nonlinear noise model:
/// identity, square, cube, tanh, exp(-|.|).
double pnl_link(int which, double v);

/// Post-nonlinear noise model. Null: X = f1(mean of first floor(d/2) z
/// coordinates + e1), Y = f2(same mean + e2); d = 1 uses the single
/// coordinate. Alternative: X = f1(0.8 e3 + e1), Y = f2(0.8 e3 + e2) with z
/// independent of (X, Y). f1, f2 are drawn uniformly per dataset.
/// `force_identity` pins f1 = f2 = identity (used by tests).
Dataset gen_pnl(std::size_t n, std::size_t d, Hypothesis hypothesis, CounterRng& rng,
                bool force_identity = false);

/// All of x, y, z iid standard normal.
Dataset gen_pure_null(std::size_t n, std::size_t d, CounterRng& rng);

/// Small synthetic fixture with extra dependence planted in one quadrant of
/// the (x, y) plane, conditionally on nothing; z is independent noise.
Dataset gen_planted_window(std::size_t n, std::size_t d, double strength, CounterRng& rng);

}  // namespace multicmh::sim
