#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "weaklab/geometry.hpp"
#include "weaklab/hover.hpp"

namespace weaklab {

struct SceneConfig {
    int height = 512;
    int width = 512;
    int count = 60;
    double radius_min = 6.0;
    double radius_max = 12.0;
    double min_separation = 30.0;    // center distance for isolated nuclei
    double touching_fraction = 0.15; // nuclei placed in contact with an earlier one
    double core_level = 0.85;
    double edge_sigma = 2.0;         // Gaussian falloff outside the disk rim
    double background_level = 0.05;
    double noise_sigma = 0.03;
    std::uint64_t seed = 20211;
};

/// The named scene the acceptance suite refers to (also data/benchmark_scene.json).
SceneConfig benchmark_scene_config();

struct GroundTruth {
    PointSet points;
    InstanceMap instances;
    std::vector<double> radii;
    std::vector<std::pair<int, int>> touching_pairs;  // point indices
};

struct Scene {
    Image2D image;
    GroundTruth truth;
};

Scene generate_scene(const SceneConfig& config);

struct DetectionNoise {
    double jitter_sigma = 0.0;
    double drop_rate = 0.0;
    double spurious_rate = 0.0;
    std::uint64_t seed = 1;
};

/// For each true center in order: jitter by sigma * N(0,1) in x then y,
/// then drop if U(0,1) < drop_rate. Afterwards, for each true center, emit a
/// uniform random point if U(0,1) < spurious_rate.
PointSet ideal_detections(const GroundTruth& truth, const DetectionNoise& noise);

}  // namespace weaklab
