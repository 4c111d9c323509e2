#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "retina/pipelines.hpp"

namespace retina::cli {

/// Sets one PipelineConfig field from its textual form. Keys are the field
/// names; sizes are written "WxH" and the ASF schedule as "5x5,7x7,...".
/// Throws std::invalid_argument for unknown keys or malformed values.
void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key = value` lines on top of `base`. '#' starts a comment.
PipelineConfig parse_config(std::istream& in, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

/// Applies "key=value" overrides in order.
void apply_overrides(PipelineConfig& cfg, const std::vector<std::string>& overrides);

/// Every field in the file syntax accepted by parse_config.
std::string format_config(const PipelineConfig& cfg);

}  // namespace retina::cli
