#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmma/perf_model.hpp"
#include "tmma/tiled_engine.hpp"
#include "tmma/traffic_analysis.hpp"

namespace tmma::cli {

using nlohmann::ordered_json;

ordered_json to_json(const TileConfig& config);
ordered_json to_json(const HwParams& hw);
ordered_json to_json(const GemmDims& dims);
ordered_json to_json(const PerfEstimate& perf);
ordered_json to_json(const ResourceEstimate& res);
ordered_json to_json(const TrafficReport& traffic);
ordered_json to_json(const DseRow& row);

std::string checksum_hex(std::uint64_t value);

double median(std::vector<double> values);

/// Skeleton shared by every report: schema version, command, argv echo.
ordered_json report_header(const std::string& command, const std::vector<std::string>& args);

}  // namespace tmma::cli
