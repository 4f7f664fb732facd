#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "multicmh/csv.hpp"
#include "multicmh/report_json.hpp"
#include "multicmh/scan.hpp"
#include "multicmh/sim/oracle.hpp"
#include "multicmh/sim/runners.hpp"
#include "multicmh/stratify.hpp"
#include "multicmh/table.hpp"

namespace {

using multicmh::Arity;
using multicmh::ColumnSpec;
using multicmh::Dataset;
using multicmh::InputError;
using multicmh::ScanConfig;

constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct CommonOpts {
  std::string input;
  std::string x_col = "x";
  std::string y_col = "y";
  std::string z_cols;
  std::string out;
  std::string format = "json";
  ScanConfig scan;
  long long strata_floor = -1;
  int workers = 0;
};

unsigned resolve_workers(int flag_value) {
  if (flag_value > 0) return static_cast<unsigned>(flag_value);
  if (const char* env = std::getenv("MULTICMH_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--input", o.input, "input CSV path (header required)")->required();
  cmd->add_option("--x", o.x_col, "x column name");
  cmd->add_option("--y", o.y_col, "y column name");
  cmd->add_option("--z", o.z_cols, "comma-separated z column names (default: all others)");
  cmd->add_option("--eta", o.scan.eta, "desired samples per stratum");
  cmd->add_option("--kmax", o.scan.k_max, "depth cap");
  cmd->add_option("--v-all", o.scan.v_all, "window total-count screen");
  cmd->add_option("--v-margin", o.scan.v_margin, "window margin screen");
  cmd->add_option("--alpha", o.scan.alpha, "significance level");
  cmd->add_option("--strata-floor", o.strata_floor, "optional floor on the stratum count");
  cmd->add_option("--workers", o.workers, "worker threads (env MULTICMH_WORKERS fallback)");
  cmd->add_option("--out", o.out, "output path (stdout when absent)");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

Dataset load_dataset(const CommonOpts& o) {
  const multicmh::CsvTable table = multicmh::read_csv_file(o.input);
  ColumnSpec spec;
  spec.x_name = o.x_col;
  spec.y_name = o.y_col;
  if (!o.z_cols.empty()) {
    spec.z_names = split_commas(o.z_cols);
  } else {
    for (const auto& h : table.header)
      if (h != o.x_col && h != o.y_col) spec.z_names.push_back(h);
  }
  return ingest(table.header, table.rows, spec);
}

void emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot open output file '" + out_path + "'");
  out << payload << '\n';
}

ScanConfig finalize_scan_config(const CommonOpts& o) {
  ScanConfig cfg = o.scan;
  if (o.strata_floor >= 0) cfg.strata_floor = static_cast<std::size_t>(o.strata_floor);
  cfg.workers = resolve_workers(o.workers);
  return cfg;
}

int cmd_test(const CommonOpts& o) {
  const Dataset ds = load_dataset(o);
  const multicmh::ScanReport report = multicmh::scan(ds, finalize_scan_config(o));
  emit(o.out, multicmh::report_to_json(report).dump(2));
  return 0;
}

int cmd_cmh(const CommonOpts& o) {
  const Dataset ds = load_dataset(o);
  if (ds.x_arity != Arity::binary) throw InputError("cmh requires a binary x column");
  if (ds.y_arity != Arity::binary) throw InputError("cmh requires a binary y column");
  const ScanConfig cfg = finalize_scan_config(o);

  std::vector<std::uint32_t> all(ds.n);
  for (std::uint32_t i = 0; i < ds.n; ++i) all[i] = i;
  const multicmh::ZRanks zr = multicmh::rank_z_columns(ds.z, ds.n, ds.d, ds.d);
  const multicmh::Stratification strat =
      multicmh::medtree(zr, all, cfg.eta, std::nullopt, cfg.strata_floor);

  const multicmh::DyadicTree tx = multicmh::build_binary_tree(ds.x);
  const multicmh::DyadicTree ty = multicmh::build_binary_tree(ds.y);
  if (tx.depth == 0 || ty.depth == 0)
    throw InputError("cmh requires two observed values in both x and y");
  const multicmh::WindowTable tbl =
      multicmh::tabulate(strat, [&](std::uint32_t i) {
        return (tx.node_of[1][i] == 0 ? 0 : 2) + (ty.node_of[1][i] == 0 ? 0 : 1);
      });
  const multicmh::CmhResult res = multicmh::cmh_statistic(tbl);
  const multicmh::EffectEstimate eff = multicmh::effect_estimate(tbl);
  nlohmann::json j = multicmh::cmh_to_json(res, eff);
  j["T"] = strat.T;
  emit(o.out, j.dump(2));
  return 0;
}

struct SimOpts {
  std::string scenario = "t1e";
  multicmh::sim::SimSpec spec;
  std::string out_prefix = "sim";
  long long strata_floor = -1;
  int workers = 0;
};

int cmd_sim(SimOpts& o) {
  using namespace multicmh::sim;
  if (o.strata_floor >= 0) o.spec.scan.strata_floor = static_cast<std::size_t>(o.strata_floor);
  o.spec.scan.workers = resolve_workers(o.workers);

  auto write_file = [](const std::string& path, const std::string& payload) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file '" + path + "'");
    out << payload;
  };

  if (o.scenario == "t1e") {
    o.spec.scenario = Scenario::null_pnl;
    const MetricsBundle b = run_t1e(o.spec);
    write_file(o.out_prefix + "_t1e.json", multicmh::metrics_to_json(b).dump(2) + "\n");
    write_file(o.out_prefix + "_ecdf.csv", multicmh::metrics_ecdf_csv(b));
  } else if (o.scenario == "roc") {
    o.spec.scenario = Scenario::null_pnl;
    const MetricsBundle b = run_roc(o.spec);
    write_file(o.out_prefix + "_roc.json", multicmh::metrics_to_json(b).dump(2) + "\n");
    write_file(o.out_prefix + "_roc.csv", multicmh::metrics_roc_csv(b));
  } else if (o.scenario == "scale") {
    o.spec.scenario = Scenario::pure_null_gaussian;
    const MetricsBundle b = run_scaling(o.spec);
    write_file(o.out_prefix + "_scale.json", multicmh::metrics_to_json(b).dump(2) + "\n");
  } else if (o.scenario == "eta") {
    o.spec.scenario = Scenario::null_pnl;
    const auto bundles = run_eta_sweep(o.spec, true);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& b : bundles) j.push_back(multicmh::metrics_to_json(b));
    write_file(o.out_prefix + "_eta.json", j.dump(2) + "\n");
  } else {
    throw InputError("unknown scenario '" + o.scenario + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiscale CMH conditional-independence test"};
  app.require_subcommand(1);

  CommonOpts test_opts, cmh_opts;
  CLI::App* test_cmd = app.add_subcommand("test", "run the multiscale scan on a CSV dataset");
  add_common_flags(test_cmd, test_opts);
  CLI::App* cmh_cmd = app.add_subcommand("cmh", "single 2x2xT CMH test (binary x and y)");
  add_common_flags(cmh_cmd, cmh_opts);

  SimOpts sim_opts;
  CLI::App* sim_cmd = app.add_subcommand("sim", "simulation harness");
  sim_cmd->add_option("--scenario", sim_opts.scenario, "t1e | roc | scale | eta")
      ->check(CLI::IsMember({"t1e", "roc", "scale", "eta"}));
  sim_cmd->add_option("--n", sim_opts.spec.n, "sample size");
  sim_cmd->add_option("--d", sim_opts.spec.d, "conditioning dimension");
  sim_cmd->add_option("--reps", sim_opts.spec.replications, "replications");
  sim_cmd->add_option("--seed", sim_opts.spec.seed, "rng seed");
  sim_cmd->add_option("--eta", sim_opts.spec.scan.eta, "desired samples per stratum");
  sim_cmd->add_option("--kmax", sim_opts.spec.scan.k_max, "depth cap");
  sim_cmd->add_option("--v-all", sim_opts.spec.scan.v_all, "window total-count screen");
  sim_cmd->add_option("--v-margin", sim_opts.spec.scan.v_margin, "window margin screen");
  sim_cmd->add_option("--alpha", sim_opts.spec.scan.alpha, "significance level");
  sim_cmd->add_option("--strata-floor", sim_opts.strata_floor, "optional stratum-count floor");
  sim_cmd->add_option("--workers", sim_opts.workers, "worker threads");
  sim_cmd->add_option("--timing-repeats", sim_opts.spec.timing_repeats, "repeats per size (scale)");
  sim_cmd->add_option("--n-grid", sim_opts.spec.n_grid, "sizes for the scaling scenario");
  sim_cmd->add_option("--eta-sweep", sim_opts.spec.eta_sweep, "eta values for the sweep");
  sim_cmd->add_option("--out", sim_opts.out_prefix, "output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (test_cmd->parsed()) return cmd_test(test_opts);
    if (cmh_cmd->parsed()) return cmd_cmh(cmh_opts);
    return cmd_sim(sim_opts);
  } catch (const InputError& e) {
    std::cerr << "error: input: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return kExitInternal;
  }
}
