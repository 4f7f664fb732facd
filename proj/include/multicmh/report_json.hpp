#pragma once

#include <json.hpp>

#include "multicmh/scan.hpp"
#include "multicmh/sim/runners.hpp"

namespace multicmh {

/// JSON form of a ScanReport: {overall_p, no_valid_window, depths, config,
/// resolutions:[{k, p_k, U}], partitions:[{l1, l2, p, L}], windows:[...]}.
/// Window order is canonical (resolution, partition, position). Non-finite
/// effect values serialize as null alongside an explicit state tag.
nlohmann::json report_to_json(const ScanReport& report);

/// Recomputes the three-stage Sidak ladder from the window entries of an
/// emitted report. Returns the overall p-value; used for round-trip checks.
double ladder_from_json(const nlohmann::json& report);

nlohmann::json cmh_to_json(const CmhResult& result, const EffectEstimate& effect);

nlohmann::json metrics_to_json(const sim::MetricsBundle& bundle);

/// CSV with header "t,ecdf" or "fpr,tpr" depending on which grids are present.
std::string metrics_ecdf_csv(const sim::MetricsBundle& bundle);
std::string metrics_roc_csv(const sim::MetricsBundle& bundle);

}  // namespace multicmh
