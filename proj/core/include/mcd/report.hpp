#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mcd/pipeline.hpp"

namespace mcd {

/// Reports and configs are JSON documents with a fixed key order. Doubles are
/// written in shortest round-trip form, so write -> read is exact.
std::string report_to_json(const DetectionReport& report);
DetectionReport report_from_json(std::string_view text);
void write_report(const DetectionReport& report, const std::filesystem::path& path);
DetectionReport read_report(const std::filesystem::path& path);

/// The config document is the "config" object of a report. Keys missing
/// from the input keep their defaults; unknown keys are rejected.
std::string config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace mcd
