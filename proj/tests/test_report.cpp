#include <doctest.h>

#include <cmath>
#include <sstream>
#include <tuple>

#include "multicmh/report_json.hpp"
#include "multicmh/sim/generators.hpp"
#include "multicmh/sim/metrics.hpp"
#include "multicmh/sim/rng.hpp"

using namespace multicmh;

TEST_CASE("report JSON round-trips the ladder exactly") {
  sim::CounterRng rng(314);
  for (int trial = 0; trial < 20; ++trial) {
    Dataset ds = sim::gen_pnl(120 + 60 * trial, 2 + trial % 3, sim::Hypothesis::null, rng);
    ScanReport r = scan(ds, {});
    nlohmann::json j = report_to_json(r);
    CHECK(ladder_from_json(j) == r.overall_p);
    // serialize/parse round trip preserves the ladder too
    nlohmann::json back = nlohmann::json::parse(j.dump());
    CHECK(ladder_from_json(back) == r.overall_p);
  }
}

TEST_CASE("report JSON carries depths, config, and counters") {
  sim::CounterRng rng(271);
  Dataset ds = sim::gen_pnl(400, 2, sim::Hypothesis::null, rng);
  ScanConfig cfg;
  cfg.eta = 12;
  ScanReport r = scan(ds, cfg);
  nlohmann::json j = report_to_json(r);
  CHECK(j["depths"][0].get<int>() == r.k1);
  CHECK(j["depths"][1].get<int>() == r.k2);
  CHECK(j["config"]["eta"].get<std::size_t>() == 12);
  CHECK(j["config"]["alpha"].get<double>() == cfg.alpha);
  CHECK(j["config"]["strata_floor"].is_null());
  CHECK(j["config"]["depth_override"].is_null());
  CHECK(j["no_valid_window"].get<bool>() == r.no_valid_window);
  CHECK(j["resolutions"].size() == r.resolutions.size());
  CHECK(j["partitions"].size() == r.partitions.size());
  CHECK(j["windows"].size() == r.windows.size());
  for (std::size_t i = 0; i < r.windows.size(); ++i) {
    const auto& w = r.windows[i];
    const auto& wj = j["windows"][i];
    CHECK(wj["n"].get<std::size_t>() == w.n_ij);
    CHECK(wj["screened"].get<bool>() == w.screened);
    if (w.screened) {
      CHECK(wj["p"].get<double>() == *w.p_value);
      CHECK(wj["alpha_n"].get<double>() == w.alpha_adj);
    } else {
      CHECK(wj["p"].is_null());
      CHECK(wj["T"].is_null());
    }
  }
}

TEST_CASE("window order is canonical: resolution, then l1, then position") {
  sim::CounterRng rng(99);
  Dataset ds = sim::gen_pnl(900, 3, sim::Hypothesis::null, rng);
  nlohmann::json j = report_to_json(scan(ds, {}));
  auto key = [](const nlohmann::json& w) {
    return std::make_tuple(w["l1"].get<int>() + w["l2"].get<int>(), w["l1"].get<int>(),
                           w["pos_i"].get<int>(), w["pos_j"].get<int>());
  };
  for (std::size_t i = 1; i < j["windows"].size(); ++i)
    CHECK(key(j["windows"][i - 1]) < key(j["windows"][i]));
}

TEST_CASE("degenerate report serializes with overall_p 1") {
  sim::CounterRng rng(5);
  Dataset ds = sim::gen_pure_null(10, 1, rng);
  ScanReport r = scan(ds, {});
  REQUIRE(r.no_valid_window);
  nlohmann::json j = report_to_json(r);
  CHECK(j["overall_p"].get<double>() == 1.0);
  CHECK(j["no_valid_window"].get<bool>());
  CHECK(ladder_from_json(j) == 1.0);
}

TEST_CASE("cmh_to_json on the M^2 = 10 fixture") {
  WindowTable t;
  t.strata_count = 2;
  t.cells = {{3, 0, 0, 3}, {3, 0, 0, 3}};
  CmhResult r = cmh_statistic(t);
  EffectEstimate e = effect_estimate(t);
  nlohmann::json j = cmh_to_json(r, e);
  CHECK(j["statistic_m2"].get<double>() == doctest::Approx(10.0));
  CHECK(j["p_value"].get<double>() == r.p_value);
  CHECK(j["strata_used"].get<std::size_t>() == 2);
  CHECK(!j["degenerate"].get<bool>());
  // diagonal tables have an infinite pooled odds ratio: tagged, value null
  CHECK(j["effect"]["state"].get<std::string>() == "pos_inf");
  CHECK(j["effect"]["theta_hat"].is_null());
}

TEST_CASE("cmh_to_json finite effect keeps numeric fields") {
  WindowTable t;
  t.strata_count = 1;
  t.cells = {{2, 1, 1, 2}};
  nlohmann::json j = cmh_to_json(cmh_statistic(t), effect_estimate(t));
  CHECK(j["effect"]["state"].get<std::string>() == "ok");
  CHECK(j["effect"]["theta_hat"].get<double>() == doctest::Approx(std::log(4.0)));
  CHECK(j["effect"]["ci"][0].get<double>() < j["effect"]["ci"][1].get<double>());
}

TEST_CASE("metrics JSON and CSV emitters") {
  sim::MetricsBundle mb;
  mb.seed = 7;
  mb.eta = 10;
  mb.rejection_rate = 0.04;
  mb.auroc = 0.5;
  mb.pvalues_null = {0.2, 0.9};
  mb.pvalues_alt = {0.1};
  mb.ecdf_grid = {0.5, 1.0};
  mb.ecdf_values = {0.5, 1.0};
  mb.roc = {{0.0, 0.0}, {0.5, 1.0}, {1.0, 1.0}};
  mb.runtimes = {{1000, 0.25}};

  nlohmann::json j = metrics_to_json(mb);
  CHECK(j["seed"].get<std::uint64_t>() == 7);
  CHECK(j["eta"].get<std::size_t>() == 10);
  CHECK(j["rejection_rate"].get<double>() == 0.04);
  CHECK(j["auroc"].get<double>() == 0.5);
  CHECK(j["pvalues_null"].size() == 2);
  CHECK(j["runtimes"][0]["n"].get<std::size_t>() == 1000);
  CHECK(j["runtimes"][0]["median_seconds"].get<double>() == 0.25);

  std::istringstream ecdf(metrics_ecdf_csv(mb));
  std::string line;
  std::getline(ecdf, line);
  CHECK(line == "t,ecdf");
  std::getline(ecdf, line);
  CHECK(line == "0.5,0.5");

  std::istringstream roc(metrics_roc_csv(mb));
  std::getline(roc, line);
  CHECK(line == "fpr,tpr");
  std::getline(roc, line);
  CHECK(line == "0,0");
  std::getline(roc, line);
  CHECK(line == "0.5,1");
  std::getline(roc, line);
  CHECK(line == "1,1");
}
