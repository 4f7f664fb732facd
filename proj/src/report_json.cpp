#include "multicmh/report_json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace multicmh {

namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

const char* or_state_name(OrState s) {
  switch (s) {
    case OrState::ok: return "ok";
    case OrState::pos_inf: return "pos_inf";
    case OrState::neg_inf: return "neg_inf";
    default: return "undefined";
  }
}

nlohmann::json config_to_json(const ScanConfig& c) {
  nlohmann::json j = {
      {"eta", c.eta},       {"k_max", c.k_max},   {"v_all", c.v_all},
      {"v_margin", c.v_margin}, {"alpha", c.alpha},
  };
  j["strata_floor"] = c.strata_floor ? nlohmann::json(*c.strata_floor) : nlohmann::json(nullptr);
  if (c.depth_override)
    j["depth_override"] = {c.depth_override->first, c.depth_override->second};
  else
    j["depth_override"] = nullptr;
  return j;
}

nlohmann::json effect_to_json(const EffectEstimate& e) {
  nlohmann::json j;
  j["state"] = or_state_name(e.state);
  j["theta_hat"] = finite_or_null(e.theta_hat);
  j["sigma_hat"] = finite_or_null(e.sigma_hat);
  j["ci"] = {finite_or_null(e.ci_low), finite_or_null(e.ci_high)};
  j["stratum_thetas"] = e.stratum_thetas;
  return j;
}

}  // namespace

nlohmann::json report_to_json(const ScanReport& report) {
  nlohmann::json j;
  j["overall_p"] = report.overall_p;
  j["no_valid_window"] = report.no_valid_window;
  j["depths"] = {report.k1, report.k2};
  j["config"] = config_to_json(report.config);

  auto& res = j["resolutions"] = nlohmann::json::array();
  for (const auto& r : report.resolutions)
    res.push_back({{"k", r.k},
                   {"U", r.valid_partitions},
                   {"p_k", r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr)}});

  auto& parts = j["partitions"] = nlohmann::json::array();
  for (const auto& p : report.partitions)
    parts.push_back({{"l1", p.l1},
                     {"l2", p.l2},
                     {"L", p.valid_windows},
                     {"p", p.p_value ? nlohmann::json(*p.p_value) : nlohmann::json(nullptr)}});

  auto& wins = j["windows"] = nlohmann::json::array();
  for (const auto& w : report.windows) {
    nlohmann::json wj = {
        {"l1", w.window.l1},     {"l2", w.window.l2},
        {"pos_i", w.window.pos_i}, {"pos_j", w.window.pos_j},
        {"n", w.n_ij},           {"screened", w.screened},
    };
    if (w.screened) {
      wj["T"] = w.strata;
      wj["p"] = *w.p_value;
      wj["alpha_n"] = w.alpha_adj;
      wj["significant"] = w.significant;
      wj["theta_hat"] = finite_or_null(w.effect.theta_hat);
      wj["sigma_hat"] = finite_or_null(w.effect.sigma_hat);
      wj["ci"] = {finite_or_null(w.effect.ci_low), finite_or_null(w.effect.ci_high)};
      wj["effect_state"] = or_state_name(w.effect.state);
      wj["stratum_thetas"] = w.effect.stratum_thetas;
    } else {
      wj["T"] = nullptr;
      wj["p"] = nullptr;
      wj["alpha_n"] = nullptr;
      wj["significant"] = false;
    }
    wins.push_back(std::move(wj));
  }
  return j;
}

double ladder_from_json(const nlohmann::json& report) {
  const int k1 = report["depths"][0].get<int>();
  const int k2 = report["depths"][1].get<int>();
  if (k1 == 0 || k2 == 0) return 1.0;
  const std::size_t resolutions_total = static_cast<std::size_t>(k1 + k2 - 1);

  // min window p per (l1, l2), plus L counts
  std::map<std::pair<int, int>, std::pair<double, std::size_t>> per_partition;
  for (const auto& w : report["windows"]) {
    if (!w["screened"].get<bool>()) continue;
    auto key = std::make_pair(w["l1"].get<int>(), w["l2"].get<int>());
    auto [it, inserted] =
        per_partition.try_emplace(key, std::numeric_limits<double>::infinity(), 0);
    it->second.first = std::min(it->second.first, w["p"].get<double>());
    ++it->second.second;
  }
  if (per_partition.empty()) return 1.0;

  std::map<int, std::pair<double, std::size_t>> per_resolution;
  for (const auto& [key, mp] : per_partition) {
    const double part_p = sidak_combine(mp.first, mp.second);
    auto [it, inserted] = per_resolution.try_emplace(
        key.first + key.second, std::numeric_limits<double>::infinity(), 0);
    it->second.first = std::min(it->second.first, part_p);
    ++it->second.second;
  }
  double min_res_p = std::numeric_limits<double>::infinity();
  for (const auto& [k, mp] : per_resolution)
    min_res_p = std::min(min_res_p, sidak_combine(mp.first, mp.second));
  return sidak_combine(min_res_p, resolutions_total);
}

nlohmann::json cmh_to_json(const CmhResult& result, const EffectEstimate& effect) {
  nlohmann::json j;
  j["statistic_m"] = result.statistic_m;
  j["statistic_m2"] = result.statistic_m2;
  j["p_value"] = result.p_value;
  j["strata_used"] = result.strata_used;
  j["degenerate"] = result.degenerate;
  j["effect"] = effect_to_json(effect);
  return j;
}

nlohmann::json metrics_to_json(const sim::MetricsBundle& bundle) {
  nlohmann::json j;
  j["seed"] = bundle.seed;
  j["rejection_rate"] = bundle.rejection_rate;
  j["auroc"] = bundle.auroc;
  if (bundle.eta > 0) j["eta"] = bundle.eta;
  if (!bundle.runtimes.empty()) {
    auto& rt = j["runtimes"] = nlohmann::json::array();
    for (const auto& [n, seconds] : bundle.runtimes)
      rt.push_back({{"n", n}, {"median_seconds", seconds}});
  }
  j["pvalues_null"] = bundle.pvalues_null;
  j["pvalues_alt"] = bundle.pvalues_alt;
  return j;
}

std::string metrics_ecdf_csv(const sim::MetricsBundle& bundle) {
  std::ostringstream out;
  out << "t,ecdf\n";
  out.precision(17);
  for (std::size_t i = 0; i < bundle.ecdf_grid.size(); ++i)
    out << bundle.ecdf_grid[i] << ',' << bundle.ecdf_values[i] << '\n';
  return out.str();
}

std::string metrics_roc_csv(const sim::MetricsBundle& bundle) {
  std::ostringstream out;
  out << "fpr,tpr\n";
  out.precision(17);
  for (const auto& [fpr, tpr] : bundle.roc) out << fpr << ',' << tpr << '\n';
  return out.str();
}

}  // namespace multicmh
