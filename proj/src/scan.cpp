#include "multicmh/scan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "multicmh/parallel.hpp"
#include "multicmh/table.hpp"

namespace multicmh {

namespace {

int ceil_log2_ratio(std::size_t num, std::size_t den) {
  // smallest k with 2^k * den >= num
  int k = 0;
  std::size_t cap = den;
  while (cap < num) {
    cap *= 2;
    ++k;
  }
  return k;
}

int ceil_log2(std::size_t v) { return v <= 1 ? 0 : std::bit_width(v - 1); }

}  // namespace

std::pair<int, int> choose_depths(const Dataset& dataset, const ScanConfig& config) {
  if (config.depth_override) return *config.depth_override;
  auto rule = [&](Arity arity) {
    if (arity == Arity::binary) return 1;
    int k = ceil_log2_ratio(dataset.n, config.v_margin);
    return std::min(config.k_max, std::max(1, k));
  };
  return {rule(dataset.x_arity), rule(dataset.y_arity)};
}

bool screen(std::size_t n_ij, std::size_t row_left, std::size_t row_right,
            std::size_t col_left, std::size_t col_right, const ScanConfig& config) {
  return n_ij >= config.v_all && row_left >= config.v_margin &&
         row_right >= config.v_margin && col_left >= config.v_margin &&
         col_right >= config.v_margin;
}

double sidak_combine(double min_p, std::size_t m) {
  if (min_p >= 1.0) return 1.0;
  // 1 - (1 - p)^m without cancellation for small p
  return -std::expm1(static_cast<double>(m) * std::log1p(-min_p));
}

double adjusted_alpha(double alpha, std::size_t resolutions_total, std::size_t u_k,
                      std::size_t l_l1l2) {
  const double m = static_cast<double>(resolutions_total) * static_cast<double>(u_k) *
                   static_cast<double>(l_l1l2);
  return -std::expm1(std::log1p(-alpha) / m);
}

ScanReport scan(const Dataset& dataset, const ScanConfig& config) {
  ScanReport report;
  report.config = config;

  const std::size_t n = dataset.n;
  const auto [k1_req, k2_req] = choose_depths(dataset, config);
  const DyadicTree tree_x = dataset.x_arity == Arity::binary
                                ? build_binary_tree(dataset.x)
                                : build_dyadic_tree(dataset.x, k1_req);
  const DyadicTree tree_y = dataset.y_arity == Arity::binary
                                ? build_binary_tree(dataset.y)
                                : build_dyadic_tree(dataset.y, k2_req);
  report.k1 = tree_x.depth;
  report.k2 = tree_y.depth;

  if (tree_x.depth == 0 || tree_y.depth == 0) {
    report.no_valid_window = true;
    report.overall_p = 1.0;
    return report;
  }

  const int k1p = tree_x.depth - 1;
  const int k2p = tree_y.depth - 1;
  const std::size_t resolutions_total =
      static_cast<std::size_t>(tree_x.depth + tree_y.depth - 1);

  // Only the first min(d, rounds) z coordinates are ever split on; ranking is
  // restricted to those.
  const std::size_t t_root = target_strata_count(n, config.eta, config.strata_floor);
  const std::size_t cols_needed =
      std::min(dataset.d, static_cast<std::size_t>(ceil_log2(t_root)) + 1);
  const ZRanks zranks = rank_z_columns(dataset.z, n, dataset.d, std::max<std::size_t>(cols_needed, 1));

  struct Task {
    std::size_t window_index;  // into report.windows
    std::vector<std::uint32_t> members;
  };
  std::vector<Task> tasks;

  struct PartitionRef {
    std::size_t first_window;  // into report.windows
    std::size_t window_count;
  };
  std::vector<PartitionRef> partition_refs;

  for (int k = 0; k <= k1p + k2p; ++k) {
    ResolutionSummary rs;
    rs.k = k;
    for (int l1 = std::max(0, k - k2p); l1 <= std::min(k1p, k); ++l1) {
      const int l2 = k - l1;
      const std::size_t nx = tree_x.levels[l1].size();
      const std::size_t ny = tree_y.levels[l2].size();
      const std::size_t nw = nx * ny;

      std::vector<std::uint32_t> count(nw, 0), row_left(nw, 0), col_left(nw, 0);
      const auto& xn = tree_x.node_of[l1];
      const auto& yn = tree_y.node_of[l2];
      const auto& xc = tree_x.node_of[l1 + 1];
      const auto& yc = tree_y.node_of[l2 + 1];
      for (std::uint32_t i = 0; i < n; ++i) {
        const std::size_t w = static_cast<std::size_t>(xn[i]) * ny + yn[i];
        ++count[w];
        if (xc[i] == 2u * xn[i]) ++row_left[w];
        if (yc[i] == 2u * yn[i]) ++col_left[w];
      }

      PartitionSummary ps;
      ps.l1 = l1;
      ps.l2 = l2;
      PartitionRef pref{report.windows.size(), nw};
      std::vector<std::size_t> member_slot(nw, std::numeric_limits<std::size_t>::max());
      for (std::size_t pi = 0; pi < nx; ++pi) {
        for (std::size_t pj = 0; pj < ny; ++pj) {
          const std::size_t w = pi * ny + pj;
          WindowResult wr;
          wr.window = Window{l1, l2, static_cast<std::uint32_t>(pi),
                             static_cast<std::uint32_t>(pj)};
          wr.n_ij = count[w];
          wr.screened = screen(count[w], row_left[w], count[w] - row_left[w], col_left[w],
                               count[w] - col_left[w], config);
          if (wr.screened) {
            ++ps.valid_windows;
            member_slot[w] = tasks.size();
            tasks.push_back(Task{report.windows.size(), {}});
            tasks.back().members.reserve(count[w]);
          }
          report.windows.push_back(std::move(wr));
        }
      }
      if (ps.valid_windows > 0) {
        for (std::uint32_t i = 0; i < n; ++i) {
          const std::size_t w = static_cast<std::size_t>(xn[i]) * ny + yn[i];
          if (member_slot[w] != std::numeric_limits<std::size_t>::max())
            tasks[member_slot[w]].members.push_back(i);
        }
        ++rs.valid_partitions;
      }
      report.partitions.push_back(ps);
      partition_refs.push_back(pref);
    }
    report.resolutions.push_back(rs);
  }

  // Per-window stratification, test, and effect estimate; embarrassingly
  // parallel, reduced in canonical order.
  parallel_for(tasks.size(), config.workers, [&](std::size_t t) {
    const Task& task = tasks[t];
    WindowResult& wr = report.windows[task.window_index];
    const Window& w = wr.window;
    const Stratification strat =
        medtree(zranks, task.members, config.eta, std::nullopt, config.strata_floor);
    const auto& xc = tree_x.node_of[w.l1 + 1];
    const auto& yc = tree_y.node_of[w.l2 + 1];
    const std::uint32_t xl = 2u * w.pos_i;
    const std::uint32_t yl = 2u * w.pos_j;
    const WindowTable tbl = tabulate(strat, [&](std::uint32_t i) {
      return (xc[i] == xl ? 0 : 2) + (yc[i] == yl ? 0 : 1);
    });
    wr.strata = strat.T;
    const CmhResult res = cmh_statistic(tbl);
    wr.p_value = res.p_value;
    wr.effect = effect_estimate(tbl);
  });

  // Three-stage Sidak ladder over partition, resolution, and overall levels.
  std::size_t pidx = 0;
  double min_resolution_p = std::numeric_limits<double>::infinity();
  bool any_valid = false;
  for (auto& rs : report.resolutions) {
    double min_partition_p = std::numeric_limits<double>::infinity();
    const std::size_t first_partition = pidx;
    for (; pidx < report.partitions.size() &&
           report.partitions[pidx].l1 + report.partitions[pidx].l2 == rs.k;
         ++pidx) {
      auto& ps = report.partitions[pidx];
      if (ps.valid_windows == 0) continue;
      const PartitionRef& pref = partition_refs[pidx];
      double min_p = std::numeric_limits<double>::infinity();
      for (std::size_t w = pref.first_window; w < pref.first_window + pref.window_count; ++w)
        if (report.windows[w].p_value)
          min_p = std::min(min_p, *report.windows[w].p_value);
      ps.p_value = sidak_combine(min_p, ps.valid_windows);
      min_partition_p = std::min(min_partition_p, *ps.p_value);
    }
    if (rs.valid_partitions > 0) {
      rs.p_value = sidak_combine(min_partition_p, rs.valid_partitions);
      min_resolution_p = std::min(min_resolution_p, *rs.p_value);
      any_valid = true;
    }
    // Window-level adjusted significance for this resolution.
    for (std::size_t pj = first_partition; pj < pidx; ++pj) {
      const auto& ps = report.partitions[pj];
      if (ps.valid_windows == 0) continue;
      const double a_adj =
          adjusted_alpha(config.alpha, resolutions_total, rs.valid_partitions, ps.valid_windows);
      const PartitionRef& pref = partition_refs[pj];
      for (std::size_t w = pref.first_window; w < pref.first_window + pref.window_count; ++w) {
        auto& wr = report.windows[w];
        if (!wr.screened) continue;
        wr.alpha_adj = a_adj;
        wr.significant = wr.p_value && *wr.p_value <= a_adj;
      }
    }
  }

  if (!any_valid) {
    report.no_valid_window = true;
    report.overall_p = 1.0;
  } else {
    report.overall_p = sidak_combine(min_resolution_p, resolutions_total);
  }
  return report;
}

}  // namespace multicmh
