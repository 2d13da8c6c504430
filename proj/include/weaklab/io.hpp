#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "weaklab/geometry.hpp"
#include "weaklab/grid.hpp"
#include "weaklab/hover.hpp"
#include "weaklab/imaging.hpp"
#include "weaklab/surrogate.hpp"
#include "weaklab/synth.hpp"
#include "weaklab/weak_labels.hpp"

namespace weaklab::io {

namespace fs = std::filesystem;

/// Undecoded samples as stored in the file (8- or 16-bit).
struct RawImage {
    int height = 0;
    int width = 0;
    int channels = 1;
    int bit_depth = 8;
    std::vector<std::uint16_t> samples;
};

RawImage read_raw(const fs::path& path);

/// PNG or binary PGM; 8-bit samples are divided by 255, 16-bit by 65535.
/// Gray+alpha and RGBA drop the alpha channel.
Image2D read_image(const fs::path& path);

/// Lexicographically ordered per-slice images in `dir`.
ImageStack read_stack(const fs::path& dir);

/// Input path may be a directory of slices or a single image (depth 1).
ImageStack read_stack_or_image(const fs::path& path);

/// 8-bit PNG, values clamped to [0,1] and rounded.
void write_png(const fs::path& path, const Image2D& image);
void write_png_gray8(const fs::path& path, const Grid<std::uint8_t>& gray);
void write_png_gray16(const fs::path& path, const Grid<std::uint16_t>& gray);
void write_png_rgb(const fs::path& path, const Grid<std::array<std::uint8_t, 3>>& rgb);

/// Little-endian float32 raster plus `<path>.json` holding {width, height, channels}.
struct FloatMap {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<float> data;
};
void write_float_map(const fs::path& path, const FloatMap& map);
FloatMap read_float_map(const fs::path& path);
fs::path sidecar_path(const fs::path& raw_path);

FloatMap to_float_map(const Grid<double>& grid);
FloatMap to_float_map(const Image2D& image);

/// CSV with header `x,y`.
PointSet read_points_csv(const fs::path& path);
void write_points_csv(const fs::path& path, const PointSet& points);

/// JSON array of [x, y] pairs.
RoiPolygon read_roi_json(const fs::path& path);

/// Label codes 0/1/255.
ClusterLabel read_cluster_label(const fs::path& path);
void write_cluster_label(const fs::path& path, const ClusterLabel& label);
/// Green nuclei, red background, black ignored.
void write_cluster_preview(const fs::path& path, const ClusterLabel& label);

void write_voronoi(const fs::path& path, const VoronoiLabel& label);
void write_voronoi_preview(const fs::path& path, const VoronoiLabel& label);

void write_instances(const fs::path& path, const InstanceMap& instances);
InstanceMap read_instances(const fs::path& path);

/// Blue for negative, red for positive, black at zero; input in [-1, 1].
void write_signed_preview(const fs::path& path, const Grid<double>& values);

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_file(const fs::path& path);

/// JSON object {feature_set, feature_dim, classes, weights, bias, feature_shift, feature_scale}.
void write_classifier(const fs::path& path, const PixelClassifier& classifier, const std::string& feature_set);
PixelClassifier read_classifier(const fs::path& path);

/// CSV `epoch,ce,dice,mse,entropy,total`.
void write_trace_csv(const fs::path& path, const std::vector<LossBreakdown>& trace);

/// Scene description as flat JSON; missing keys keep their defaults, unknown keys are rejected.
SceneConfig read_scene_config(const fs::path& path);
void write_scene_config(const fs::path& path, const SceneConfig& config);

}  // namespace weaklab::io
