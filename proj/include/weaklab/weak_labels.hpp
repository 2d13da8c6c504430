#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "weaklab/geometry.hpp"
#include "weaklab/grid.hpp"

namespace weaklab {

/// Pixel class codes; the numeric values are the on-disk label encoding.
enum class PixelClass : std::uint8_t { background = 0, nuclei = 1, ignored = 255 };

using ClusterLabel = Grid<PixelClass>;

/// Per-pixel feature vectors, pixel-major: features[pixel * dim + j].
struct FeatureMap {
    int height = 0;
    int width = 0;
    int dim = 0;
    std::vector<double> features;

    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    const double* pixel(std::size_t i) const noexcept { return features.data() + i * dim; }
};

/// Clipped distance first, then every color channel rescaled from [0,1] to [0,cap].
FeatureMap build_feature_map(const Image2D& image, const DistanceMap& dmap_clipped, double cap);

struct KMeansOptions {
    int k = 3;
    std::uint64_t seed = 7;
    int max_iter = 100;
    double tol = 1e-4;
};

struct KMeansResult {
    std::vector<int> assignments;   // per pixel, in [0, k)
    std::vector<double> centroids;  // k * dim
    int dim = 0;
    double objective = 0.0;         // sum of squared distances to assigned centroid
    std::vector<double> objective_trace;
    int iterations = 0;

    int k() const noexcept { return dim == 0 ? 0 : static_cast<int>(centroids.size()) / dim; }
};

/// Lloyd's algorithm with k-means++ seeding. Deterministic for a fixed seed and
/// independent of the thread count.
KMeansResult kmeans(const FeatureMap& features, const KMeansOptions& options);

/// Nearest centroid per pixel, lowest index on ties.
std::vector<int> assign_to_centroids(const FeatureMap& features, const std::vector<double>& centroids);

enum class BackgroundRule {
    literal,     // cluster with the most dilated-point pixels
    complement,  // cluster with the most pixels outside the dilated points
};

BackgroundRule parse_background_rule(const std::string& name);
std::string to_string(BackgroundRule rule);

/// Class designated to each cluster index.
struct ClassDesignation {
    std::array<PixelClass, 3> cluster_class{};
    int nuclei_cluster = 0;
    int background_cluster = 1;
    int ignored_cluster = 2;
};

ClassDesignation assign_classes(const KMeansResult& result, int height, int width,
                                const PointSet& points, const Mask& dilated_mask,
                                BackgroundRule rule);

ClusterLabel label_from_clusters(const KMeansResult& result, const ClassDesignation& designation,
                                 int height, int width);

/// Overwrites Voronoi edge pixels with background, then forces each
/// annotation pixel to nuclei.
ClusterLabel refine_with_voronoi(const ClusterLabel& label, const VoronoiLabel& vlabel,
                                 const PointSet& points, int edge_width);

struct ClusterLabelConfig {
    double distance_cap = 20.0;
    KMeansOptions kmeans{};
    double dilation_radius = 11.0;
    BackgroundRule background_rule = BackgroundRule::complement;
    int edge_width = 2;
};

ClusterLabel make_cluster_label(const Image2D& image, const PointSet& points,
                                const ClusterLabelConfig& config = {});

}  // namespace weaklab
