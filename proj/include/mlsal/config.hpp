#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mlsal/corner_prior.hpp"

namespace mlsal {

struct PipelineConfig {
    double sigma1 = 0.1;
    double sigma2 = 0.25;
    double eta = 6.0;
    std::vector<int> scales = {100, 150, 200, 250, 300};
    double corner_fraction = 0.15;
    int h_count = 200;
    double beta = 1.0;
    int guided_radius = 0;  // 0 selects round(0.04 * min(width, height))
    double guided_eps = 1e-3;
    RegionPriorMode f_mode = RegionPriorMode::Constant;
    bool squared_distance = false;
    bool literal_log_sign = false;
    double beta2 = 0.3;
    std::uint64_t seed = 7;
    double compactness = 10.0;
    int slic_iterations = 10;

    bool operator==(const PipelineConfig&) const = default;
};

/// Throws Error when a field is out of range.
void validate(const PipelineConfig& config);

/// Flat `key = value` text. Blank lines and `#` comments are ignored;
/// unknown keys and malformed values are errors.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Applies a single key/value pair; the same keys as the file format.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

std::string serialize_config(const PipelineConfig& config);

/// Keys in serialization order.
const std::vector<std::string>& config_keys();

}  // namespace mlsal
