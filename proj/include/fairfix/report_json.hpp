#pragma once

// JSON views of reports. Key order is fixed; doubles are written with the
// shortest representation that parses back to the same value; non-finite
// and undefined values become null.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "fairfix/bias.hpp"
#include "fairfix/data.hpp"
#include "fairfix/fairness.hpp"
#include "fairfix/localize.hpp"
#include "fairfix/repair.hpp"

namespace fairfix {

using ordered_json = nlohmann::ordered_json;

ordered_json number_or_null(double v);
ordered_json number_or_null(const std::optional<double>& v);

ordered_json to_json(const GroupCounts& counts);
ordered_json to_json(const DeprivedGroup& deprived);
ordered_json to_json(const FairnessReport& report);
ordered_json to_json(const BiasWeights& bias);
ordered_json to_json(const WeightCoord& coord);

/// `include_scores` adds the full per-weight score table.
ordered_json to_json(const LocalizationResult& result, bool include_scores = false);

ordered_json to_json(const RepairConfig& config);
ordered_json to_json(const RepairResult& result);

/// Size, columns, encodings and per-group / per-class counts.
ordered_json dataset_summary(const LabeledDataset& dataset, const std::filesystem::path& source);

/// Parses a FairnessReport written by to_json.
FairnessReport fairness_report_from_json(const nlohmann::json& doc);

}  // namespace fairfix
