#include "weaklab/weak_labels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "weaklab/diag.hpp"
#include "weaklab/parallel.hpp"

namespace weaklab {

FeatureMap build_feature_map(const Image2D& image, const DistanceMap& dmap_clipped, double cap) {
    if (!(cap > 0.0)) throw InvalidInput("distance cap must be positive");
    if (image.height != dmap_clipped.height || image.width != dmap_clipped.width)
        throw InvalidInput("image is " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                           " but the distance map is " + std::to_string(dmap_clipped.width) + "x" +
                           std::to_string(dmap_clipped.height));
    FeatureMap fm;
    fm.height = image.height;
    fm.width = image.width;
    fm.dim = 1 + image.channels;
    fm.features.resize(fm.pixel_count() * static_cast<std::size_t>(fm.dim));
    const auto n = static_cast<std::ptrdiff_t>(fm.pixel_count());
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double* f = fm.features.data() + i * fm.dim;
        f[0] = dmap_clipped.data[static_cast<std::size_t>(i)];
        for (int ch = 0; ch < image.channels; ++ch)
            f[1 + ch] = static_cast<double>(image.data[static_cast<std::size_t>(i) * image.channels + ch]) * cap;
    }
    return fm;
}

namespace {

// Fixed-size blocks make every reduction independent of the thread count.
constexpr std::size_t kBlock = 4096;

double squared_distance(const double* a, const double* b, int dim) noexcept {
    double d = 0.0;
    for (int t = 0; t < dim; ++t) {
        const double diff = a[t] - b[t];
        d += diff * diff;
    }
    return d;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void require_distinct(const FeatureMap& fm, int k) {
    std::vector<std::size_t> distinct;
    for (std::size_t i = 0; i < fm.pixel_count() && distinct.size() < static_cast<std::size_t>(k); ++i) {
        const double* f = fm.pixel(i);
        const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](std::size_t j) {
            return std::equal(f, f + fm.dim, fm.pixel(j));
        });
        if (!seen) distinct.push_back(i);
    }
    if (distinct.size() < static_cast<std::size_t>(k))
        throw InvalidInput("feature map has " + std::to_string(distinct.size()) +
                           " distinct vectors, fewer than k = " + std::to_string(k));
}

std::vector<double> seed_plus_plus(const FeatureMap& fm, int k, std::mt19937_64& rng) {
    const std::size_t n = fm.pixel_count();
    const int dim = fm.dim;
    std::vector<double> centroids;
    centroids.reserve(static_cast<std::size_t>(k * dim));
    const std::size_t first = uniform_index(rng, n);
    centroids.insert(centroids.end(), fm.pixel(first), fm.pixel(first) + dim);

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(fm.pixel(i), centroids.data(), dim);
    for (int j = 1; j < k; ++j) {
        double total = 0.0;
        for (double v : d2) total += v;
        const double target = uniform01(rng) * total;
        double acc = 0.0;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            acc += d2[i];
            pick = i;
            if (acc > target) break;
        }
        const double* c = fm.pixel(pick);
        centroids.insert(centroids.end(), c, c + dim);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(fm.pixel(i), c, dim));
    }
    return centroids;
}

double objective_of(const FeatureMap& fm, const std::vector<int>& assign, const std::vector<double>& centroids) {
    const std::size_t n = fm.pixel_count();
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (std::size_t b = 0; b < blocks; ++b) {
        double s = 0.0;
        for (std::size_t i = b * kBlock, end = std::min(n, (b + 1) * kBlock); i < end; ++i)
            s += squared_distance(fm.pixel(i), centroids.data() + static_cast<std::size_t>(assign[i] * fm.dim), fm.dim);
        partial[b] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

// Cluster means; empty clusters are reseeded to the pixel farthest from its
// assigned centroid. Returns false if no reseeding was needed.
bool update_centroids(const FeatureMap& fm, const std::vector<int>& assign, int k,
                      const std::vector<double>& previous, std::vector<double>& next) {
    const int dim = fm.dim;
    const std::size_t n = fm.pixel_count();
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    const std::size_t stride = static_cast<std::size_t>(k) * static_cast<std::size_t>(dim + 1);
    std::vector<double> partial(blocks * stride, 0.0);
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (std::size_t b = 0; b < blocks; ++b) {
        double* acc = partial.data() + b * stride;
        for (std::size_t i = b * kBlock, end = std::min(n, (b + 1) * kBlock); i < end; ++i) {
            double* slot = acc + static_cast<std::size_t>(assign[i]) * static_cast<std::size_t>(dim + 1);
            const double* f = fm.pixel(i);
            for (int t = 0; t < dim; ++t) slot[t] += f[t];
            slot[dim] += 1.0;
        }
    }
    std::vector<double> sums(stride, 0.0);
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t t = 0; t < stride; ++t) sums[t] += partial[b * stride + t];

    next.assign(static_cast<std::size_t>(k * dim), 0.0);
    std::vector<int> empty;
    for (int j = 0; j < k; ++j) {
        const double* slot = sums.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(dim + 1);
        if (slot[dim] == 0.0) {
            empty.push_back(j);
            continue;
        }
        for (int t = 0; t < dim; ++t) next[static_cast<std::size_t>(j * dim + t)] = slot[t] / slot[dim];
    }
    if (empty.empty()) return false;

    std::vector<std::size_t> used;
    for (int j : empty) {
        double far = -1.0;
        std::size_t pick = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(used.begin(), used.end(), i) != used.end()) continue;
            const double d = squared_distance(fm.pixel(i), previous.data() + static_cast<std::size_t>(assign[i] * dim), dim);
            if (d > far) {
                far = d;
                pick = i;
            }
        }
        used.push_back(pick);
        std::copy(fm.pixel(pick), fm.pixel(pick) + dim, next.begin() + j * dim);
    }
    return true;
}

bool has_empty_cluster(const std::vector<int>& assign, int k) {
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    for (int a : assign) seen[static_cast<std::size_t>(a)] = 1;
    return std::find(seen.begin(), seen.end(), 0) != seen.end();
}

}  // namespace

std::vector<int> assign_to_centroids(const FeatureMap& features, const std::vector<double>& centroids) {
    const int dim = features.dim;
    const int k = static_cast<int>(centroids.size()) / dim;
    std::vector<int> out(features.pixel_count());
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* f = features.pixel(static_cast<std::size_t>(i));
        double best = std::numeric_limits<double>::infinity();
        int best_j = 0;
        for (int j = 0; j < k; ++j) {
            const double d = squared_distance(f, centroids.data() + static_cast<std::size_t>(j * dim), dim);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        out[static_cast<std::size_t>(i)] = best_j;
    }
    return out;
}

KMeansResult kmeans(const FeatureMap& features, const KMeansOptions& options) {
    const int k = options.k;
    if (k < 1) throw InvalidInput("k must be at least 1");
    if (features.dim < 1) throw InvalidInput("feature map has no components");
    if (features.pixel_count() < static_cast<std::size_t>(k))
        throw InvalidInput("fewer pixels than clusters");
    if (options.max_iter < 1) throw InvalidInput("max_iter must be at least 1");
    require_distinct(features, k);

    std::mt19937_64 rng(options.seed);
    KMeansResult result;
    result.dim = features.dim;
    std::vector<double> centroids = seed_plus_plus(features, k, rng);
    std::vector<double> next;
    std::vector<int> assign;
    std::vector<int> previous;

    for (int it = 0; it < options.max_iter; ++it) {
        assign = assign_to_centroids(features, centroids);
        result.objective_trace.push_back(objective_of(features, assign, centroids));
        result.iterations = it + 1;
        if (it > 0 && assign == previous && !has_empty_cluster(assign, k)) break;

        const bool reseeded = update_centroids(features, assign, k, centroids, next);
        double shift = 0.0;
        for (std::size_t t = 0; t < next.size(); ++t) shift = std::max(shift, std::abs(next[t] - centroids[t]));
        centroids.swap(next);
        previous = assign;
        if (!reseeded && shift < options.tol) {
            assign = assign_to_centroids(features, centroids);
            result.objective_trace.push_back(objective_of(features, assign, centroids));
            if (!has_empty_cluster(assign, k)) break;
        }
    }
    if (has_empty_cluster(assign, k)) warn("k-means finished with an empty cluster");

    result.assignments = std::move(assign);
    result.centroids = std::move(centroids);
    result.objective = result.objective_trace.back();
    return result;
}

BackgroundRule parse_background_rule(const std::string& name) {
    if (name == "literal") return BackgroundRule::literal;
    if (name == "complement") return BackgroundRule::complement;
    throw InvalidInput("unknown background rule '" + name + "' (expected literal or complement)");
}

std::string to_string(BackgroundRule rule) {
    return rule == BackgroundRule::literal ? "literal" : "complement";
}

ClassDesignation assign_classes(const KMeansResult& result, int height, int width,
                                const PointSet& points, const Mask& dilated_mask,
                                BackgroundRule rule) {
    if (result.k() != 3) throw InvalidInput("class designation needs exactly 3 clusters");
    const auto n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    if (result.assignments.size() != n || dilated_mask.size() != n)
        throw InvalidInput("cluster assignments and dilated mask must match the raster");

    std::array<long, 3> point_hits{};
    for (const auto& p : points) {
        const auto px = pixel_of(p, height, width);
        ++point_hits[static_cast<std::size_t>(result.assignments[static_cast<std::size_t>(px.row) * width + px.col])];
    }
    std::array<long, 3> overlap{};
    const std::uint8_t wanted = rule == BackgroundRule::literal ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i)
        if ((dilated_mask.data[i] != 0 ? 1 : 0) == wanted) ++overlap[static_cast<std::size_t>(result.assignments[i])];

    ClassDesignation d;
    d.nuclei_cluster = 0;
    for (int j = 1; j < 3; ++j)
        if (point_hits[j] > point_hits[d.nuclei_cluster]) d.nuclei_cluster = j;
    for (int j = 0; j < 3; ++j)
        if (j != d.nuclei_cluster && point_hits[j] == point_hits[d.nuclei_cluster])
            warn("clusters " + std::to_string(std::min(j, d.nuclei_cluster)) + " and " +
                 std::to_string(std::max(j, d.nuclei_cluster)) +
                 " tie on annotation overlap; lower index designated nuclei");

    int a = -1, b = -1;
    for (int j = 0; j < 3; ++j) {
        if (j == d.nuclei_cluster) continue;
        (a < 0 ? a : b) = j;
    }
    if (overlap[a] == overlap[b])
        warn("clusters " + std::to_string(a) + " and " + std::to_string(b) +
             " tie on background overlap; lower index designated background");
    d.background_cluster = overlap[b] > overlap[a] ? b : a;
    d.ignored_cluster = d.background_cluster == a ? b : a;

    d.cluster_class[d.nuclei_cluster] = PixelClass::nuclei;
    d.cluster_class[d.background_cluster] = PixelClass::background;
    d.cluster_class[d.ignored_cluster] = PixelClass::ignored;
    return d;
}

ClusterLabel label_from_clusters(const KMeansResult& result, const ClassDesignation& designation,
                                 int height, int width) {
    ClusterLabel label(height, width, PixelClass::background);
    if (result.assignments.size() != label.size())
        throw InvalidInput("cluster assignments do not match the raster");
    for (std::size_t i = 0; i < label.size(); ++i)
        label.data[i] = designation.cluster_class[static_cast<std::size_t>(result.assignments[i])];
    return label;
}

ClusterLabel refine_with_voronoi(const ClusterLabel& label, const VoronoiLabel& vlabel,
                                 const PointSet& points, int edge_width) {
    if (!label.same_shape(vlabel)) throw InvalidInput("cluster label and Voronoi label differ in size");
    const Mask edges = voronoi_edges(vlabel, edge_width);
    ClusterLabel out = label;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (edges.data[i]) out.data[i] = PixelClass::background;
    for (const auto& p : points) {
        const auto px = pixel_of(p, out.height, out.width);
        out(px.row, px.col) = PixelClass::nuclei;
    }
    return out;
}

ClusterLabel make_cluster_label(const Image2D& image, const PointSet& points, const ClusterLabelConfig& config) {
    if (points.empty()) throw InvalidInput("cluster labelling needs at least one annotation point");
    points.require_within(image.height, image.width);
    const auto sites = nearest_site_transform(points, image.height, image.width);
    const auto clipped = clip_distance(sites.distance, config.distance_cap);
    const auto features = build_feature_map(image, clipped, config.distance_cap);
    const auto clusters = kmeans(features, config.kmeans);
    const auto dilated = dilate_points(points, config.dilation_radius, image.height, image.width);
    const auto designation =
        assign_classes(clusters, image.height, image.width, points, dilated, config.background_rule);
    const auto label = label_from_clusters(clusters, designation, image.height, image.width);
    return refine_with_voronoi(label, sites.index, points, config.edge_width);
}

}  // namespace weaklab
