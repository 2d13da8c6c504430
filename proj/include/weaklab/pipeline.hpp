#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>
#include "weaklab/losses.hpp"
#include "weaklab/metrics.hpp"
#include "weaklab/weak_labels.hpp"

namespace weaklab {

inline constexpr const char* kToolVersion = "0.3.0";

struct PipelineConfig {
    std::filesystem::path stack;   // directory of slices or a single image
    std::filesystem::path points;  // full-image coordinates
    std::optional<std::filesystem::path> roi;
    int patch_size = 256;
    double patch_overlap = 0.10;
    ClusterLabelConfig cluster{};
    double gaussian_sigma = 5.0;
    LossWeights loss_weights{};
    MatchConfig match{};
    std::filesystem::path output_dir = "weaklab_out";

    friend bool operator==(const PipelineConfig& a, const PipelineConfig& b);
};

nlohmann::json to_json(const PipelineConfig& config);
/// Rejects unknown keys and out-of-range values with ConfigError.
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

struct ArtifactRecord {
    std::string path;  // relative to the output directory
    std::string kind;
    std::string sha256;
};

struct PipelineResult {
    std::vector<ArtifactRecord> artifacts;
    nlohmann::json manifest;
    std::filesystem::path manifest_path;
};

/// mip -> roi -> patches -> cluster label -> instances -> HoVer maps ->
/// Gaussian mask, written per patch with a manifest.json. Throws ConfigError
/// for unreadable inputs; other failures carry the stage name.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Artifact kinds written for every patch.
const std::vector<std::string>& patch_artifact_kinds();

}  // namespace weaklab
