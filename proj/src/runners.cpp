#include "multicmh/sim/runners.hpp"

#include <algorithm>
#include <chrono>

#include "multicmh/parallel.hpp"
#include "multicmh/sim/metrics.hpp"

namespace multicmh::sim {

namespace {

// Stream ids: hypothesis selects a disjoint half-space so null and alt
// replications never share a stream.
std::uint64_t stream_id(Hypothesis hypothesis, std::uint64_t replication) {
  return (hypothesis == Hypothesis::alt ? 0x8000000000000000ull : 0ull) | replication;
}

std::vector<double> default_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) grid.push_back(static_cast<double>(i) / 100.0);
  return grid;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

Dataset generate(const SimSpec& spec, Hypothesis hypothesis, std::uint64_t replication) {
  CounterRng rng = CounterRng::stream(spec.seed, stream_id(hypothesis, replication));
  // The scenario names the alternative family; `hypothesis` picks the side.
  switch (spec.scenario) {
    case Scenario::pure_null_gaussian:
      return gen_pure_null(spec.n, spec.d, rng);
    case Scenario::planted_window:
      return hypothesis == Hypothesis::alt ? gen_planted_window(spec.n, spec.d, 0.8, rng)
                                           : gen_pure_null(spec.n, spec.d, rng);
    case Scenario::null_pnl:
    case Scenario::alt_pnl:
    default:
      return gen_pnl(spec.n, spec.d, hypothesis, rng);
  }
}

std::vector<double> collect_pvalues(const SimSpec& spec, Hypothesis hypothesis) {
  std::vector<double> pvalues(spec.replications);
  ScanConfig scan_cfg = spec.scan;
  const unsigned workers = scan_cfg.workers;
  scan_cfg.workers = 1;  // parallelism lives at the replication level here
  parallel_for(spec.replications, workers, [&](std::size_t rep) {
    const Dataset ds = generate(spec, hypothesis, rep);
    pvalues[rep] = scan(ds, scan_cfg).overall_p;
  });
  return pvalues;
}

MetricsBundle run_t1e(const SimSpec& spec) {
  MetricsBundle out;
  out.seed = spec.seed;
  out.eta = spec.scan.eta;
  out.pvalues_null = collect_pvalues(spec, Hypothesis::null);
  std::size_t rejections = 0;
  for (double p : out.pvalues_null)
    if (p <= spec.scan.alpha) ++rejections;
  out.rejection_rate = static_cast<double>(rejections) / static_cast<double>(spec.replications);
  out.ecdf_grid = default_grid();
  out.ecdf_values = ecdf_on_grid(out.pvalues_null, out.ecdf_grid);
  return out;
}

MetricsBundle run_roc(const SimSpec& spec) {
  MetricsBundle out;
  out.seed = spec.seed;
  out.eta = spec.scan.eta;
  out.pvalues_null = collect_pvalues(spec, Hypothesis::null);
  SimSpec alt_spec = spec;
  if (spec.scenario == Scenario::null_pnl) alt_spec.scenario = Scenario::alt_pnl;
  out.pvalues_alt = collect_pvalues(alt_spec, Hypothesis::alt);
  out.roc = roc_points(out.pvalues_null, out.pvalues_alt);
  out.auroc = auroc(out.pvalues_null, out.pvalues_alt);
  std::size_t rejections = 0;
  for (double p : out.pvalues_alt)
    if (p <= spec.scan.alpha) ++rejections;
  out.rejection_rate = static_cast<double>(rejections) / static_cast<double>(spec.replications);
  return out;
}

MetricsBundle run_scaling(const SimSpec& spec) {
  MetricsBundle out;
  out.seed = spec.seed;
  out.eta = spec.scan.eta;
  std::vector<std::size_t> sizes = spec.n_grid;
  if (sizes.empty()) sizes = {1000, 2000, 4000, 8000};
  for (std::size_t size_idx = 0; size_idx < sizes.size(); ++size_idx) {
    const std::size_t n = sizes[size_idx];
    std::vector<double> times;
    for (std::size_t rep = 0; rep < spec.timing_repeats; ++rep) {
      CounterRng rng = CounterRng::stream(spec.seed, (size_idx << 32) | rep);
      const Dataset ds = gen_pure_null(n, spec.d, rng);
      const auto t0 = std::chrono::steady_clock::now();
      volatile double sink = scan(ds, spec.scan).overall_p;
      (void)sink;
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    out.runtimes.emplace_back(n, median(std::move(times)));
  }
  return out;
}

std::vector<MetricsBundle> run_eta_sweep(const SimSpec& spec, bool with_t1e) {
  std::vector<MetricsBundle> out;
  for (std::size_t eta : spec.eta_sweep) {
    SimSpec sub = spec;
    sub.scan.eta = eta;
    MetricsBundle bundle = run_roc(sub);
    if (with_t1e) {
      const MetricsBundle t1e = run_t1e(sub);
      bundle.rejection_rate = t1e.rejection_rate;
      bundle.ecdf_grid = t1e.ecdf_grid;
      bundle.ecdf_values = t1e.ecdf_values;
    }
    bundle.eta = eta;
    out.push_back(std::move(bundle));
  }
  return out;
}

}  // namespace multicmh::sim
