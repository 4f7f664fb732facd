#include "multicmh/sim/oracle.hpp"

#include <algorithm>

#include "multicmh/cmh.hpp"
#include "multicmh/dataset.hpp"
#include "multicmh/table.hpp"

namespace multicmh::sim {

PermutationOracle::PermutationOracle(const Dataset& dataset, const ScanConfig& config) {
  n_ = dataset.n;
  const auto [k1_req, k2_req] = choose_depths(dataset, config);
  const DyadicTree tree_x = dataset.x_arity == Arity::binary
                                ? build_binary_tree(dataset.x)
                                : build_dyadic_tree(dataset.x, k1_req);
  const DyadicTree tree_y = dataset.y_arity == Arity::binary
                                ? build_binary_tree(dataset.y)
                                : build_dyadic_tree(dataset.y, k2_req);
  k1_ = tree_x.depth;
  k2_ = tree_y.depth;
  xnode_ = tree_x.node_of;

  ypos_.resize(n_);
  for (std::uint32_t r = 0; r < n_; ++r) ypos_[tree_y.order[r]] = r;
  ypos2node_.resize(tree_y.levels.size());
  for (std::size_t l = 0; l < tree_y.levels.size(); ++l) {
    ypos2node_[l].resize(n_);
    for (std::uint32_t p = 0; p < tree_y.levels[l].size(); ++p)
      for (std::uint32_t r = tree_y.levels[l][p].lo; r < tree_y.levels[l][p].hi; ++r)
        ypos2node_[l][r] = p;
  }

  // One z-only stratification shared by every window.
  std::vector<std::uint32_t> all(n_);
  for (std::uint32_t i = 0; i < n_; ++i) all[i] = i;
  const ZRanks zr = rank_z_columns(dataset.z, n_, dataset.d, dataset.d);
  strat_ = medtree(zr, all, config.eta, std::nullopt, config.strata_floor);

  // Enumerate screened windows with the same rule as the scan driver.
  for (int l1 = 0; l1 < k1_; ++l1) {
    for (int l2 = 0; l2 < k2_; ++l2) {
      const std::size_t nx = tree_x.levels[l1].size();
      const std::size_t ny = tree_y.levels[l2].size();
      std::vector<std::uint32_t> count(nx * ny, 0), row_left(nx * ny, 0),
          col_left(nx * ny, 0);
      for (std::uint32_t i = 0; i < n_; ++i) {
        const std::size_t w = static_cast<std::size_t>(xnode_[l1][i]) * ny +
                              ypos2node_[l2][ypos_[i]];
        ++count[w];
        if (xnode_[l1 + 1][i] == 2u * xnode_[l1][i]) ++row_left[w];
        if (ypos2node_[l2 + 1][ypos_[i]] == 2u * ypos2node_[l2][ypos_[i]]) ++col_left[w];
      }
      for (std::size_t pi = 0; pi < nx; ++pi)
        for (std::size_t pj = 0; pj < ny; ++pj) {
          const std::size_t w = pi * ny + pj;
          if (screen(count[w], row_left[w], count[w] - row_left[w], col_left[w],
                     count[w] - col_left[w], config))
            windows_.push_back(Window{l1, l2, static_cast<std::uint32_t>(pi),
                                      static_cast<std::uint32_t>(pj)});
        }
    }
  }
}

void PermutationOracle::compute_windows(const std::vector<std::uint32_t>& ypos,
                                        std::vector<double>* pvals, std::vector<double>* m2,
                                        std::vector<std::int64_t>* a_cells) const {
  for (const Window& w : windows_) {
    WindowTable tbl;
    tbl.strata_count = strat_.T;
    tbl.cells.assign(strat_.T, {0, 0, 0, 0});
    const auto& xn = xnode_[w.l1];
    const auto& xcn = xnode_[w.l1 + 1];
    const auto& ynl = ypos2node_[w.l2];
    const auto& ycn = ypos2node_[w.l2 + 1];
    for (std::size_t t = 0; t < strat_.T; ++t) {
      for (std::uint32_t i : strat_.strata[t].members) {
        if (xn[i] != w.pos_i) continue;
        const std::uint32_t p = ypos[i];
        if (ynl[p] != w.pos_j) continue;
        const int quad = (xcn[i] == 2u * w.pos_i ? 0 : 2) + (ycn[p] == 2u * w.pos_j ? 0 : 1);
        ++tbl.cells[t][quad];
      }
    }
    const CmhResult res = cmh_statistic(tbl);
    if (pvals) pvals->push_back(res.p_value);
    if (m2) m2->push_back(res.statistic_m2);
    if (a_cells) {
      std::int64_t a = 0;
      for (const auto& cell : tbl.cells) a += cell[0];
      a_cells->push_back(a);
    }
  }
}

std::vector<double> PermutationOracle::observed_pvalues() const {
  std::vector<double> p;
  compute_windows(ypos_, &p, nullptr, nullptr);
  return p;
}

std::vector<double> PermutationOracle::observed_m2() const {
  std::vector<double> m2;
  compute_windows(ypos_, nullptr, &m2, nullptr);
  return m2;
}

template <typename Sink>
void PermutationOracle::run_resamples(std::size_t resamples, CounterRng& rng,
                                      Sink&& sink) const {
  std::vector<std::uint32_t> ypos = ypos_;
  std::vector<std::uint32_t> scratch;
  for (std::size_t r = 0; r < resamples; ++r) {
    // Permute y assignments within each stratum; all stratum-specific margins
    // of every window are preserved exactly.
    for (const auto& s : strat_.strata) {
      scratch.clear();
      for (std::uint32_t i : s.members) scratch.push_back(ypos[i]);
      shuffle(scratch.begin(), scratch.end(), rng);
      for (std::size_t q = 0; q < s.members.size(); ++q) ypos[s.members[q]] = scratch[q];
    }
    sink(ypos);
  }
}

std::vector<std::vector<double>> PermutationOracle::resample_pvalues(std::size_t resamples,
                                                                     CounterRng& rng) const {
  std::vector<std::vector<double>> out;
  out.reserve(resamples);
  run_resamples(resamples, rng, [&](const std::vector<std::uint32_t>& ypos) {
    std::vector<double> p;
    p.reserve(windows_.size());
    compute_windows(ypos, &p, nullptr, nullptr);
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<std::vector<double>> PermutationOracle::resample_m2(std::size_t resamples,
                                                                CounterRng& rng) const {
  std::vector<std::vector<double>> out;
  out.reserve(resamples);
  run_resamples(resamples, rng, [&](const std::vector<std::uint32_t>& ypos) {
    std::vector<double> m2;
    m2.reserve(windows_.size());
    compute_windows(ypos, nullptr, &m2, nullptr);
    out.push_back(std::move(m2));
  });
  return out;
}

std::vector<std::int64_t> PermutationOracle::resample_a_cell(std::size_t w,
                                                             std::size_t resamples,
                                                             CounterRng& rng) const {
  std::vector<std::int64_t> out;
  out.reserve(resamples);
  run_resamples(resamples, rng, [&](const std::vector<std::uint32_t>& ypos) {
    std::vector<std::int64_t> cells;
    cells.reserve(windows_.size());
    compute_windows(ypos, nullptr, nullptr, &cells);
    out.push_back(cells[w]);
  });
  return out;
}

}  // namespace multicmh::sim
