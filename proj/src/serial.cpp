#include "weaklab/serial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "weaklab/imaging.hpp"

namespace weaklab::serial {

Image2D mip(const ImageStack& stack) {
    if (stack.depth < 1 || stack.slice_size() == 0) throw InvalidInput("MIP of an empty stack");
    Image2D out(stack.height, stack.width, stack.channels);
    for (int r = 0; r < stack.height; ++r)
        for (int c = 0; c < stack.width; ++c)
            for (int ch = 0; ch < stack.channels; ++ch) {
                float m = stack.at(0, r, c, ch);
                for (int z = 1; z < stack.depth; ++z) m = std::max(m, stack.at(z, r, c, ch));
                out.at(r, c, ch) = m;
            }
    return out;
}

NearestSite nearest_site_transform(const PointSet& points, int height, int width) {
    if (points.empty()) throw InvalidInput("at least one seed point is required");
    NearestSite out{VoronoiLabel(height, width), DistanceMap(height, width)};
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            double best = std::numeric_limits<double>::infinity();
            std::int32_t best_i = 0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const double dx = c - points[i].x;
                const double dy = r - points[i].y;
                const double v = dx * dx + dy * dy;
                if (v < best) {
                    best = v;
                    best_i = static_cast<std::int32_t>(i);
                }
            }
            out.index(r, c) = best_i;
            out.distance(r, c) = std::sqrt(best);
        }
    }
    return out;
}

Image2D gaussian_mask(const PointSet& points, int height, int width, double sigma) {
    if (!(sigma > 0.0)) throw InvalidInput("Gaussian sigma must be positive");
    Image2D out(height, width, 1);
    const double two_sigma2 = 2.0 * sigma * sigma;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            float m = 0.0f;
            for (const auto& p : points) {
                const double dx = c - p.x;
                const double dy = r - p.y;
                double v = std::exp(-(dx * dx + dy * dy) / two_sigma2);
                if (v < kGaussianFloor) v = 0.0;
                m = std::max(m, static_cast<float>(v));
            }
            out.at(r, c) = m;
        }
    }
    return out;
}

std::vector<int> assign_to_centroids(const FeatureMap& features, const std::vector<double>& centroids) {
    const int dim = features.dim;
    const int k = static_cast<int>(centroids.size()) / dim;
    std::vector<int> out(features.pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double* f = features.pixel(i);
        double best = std::numeric_limits<double>::infinity();
        int best_j = 0;
        for (int j = 0; j < k; ++j) {
            double d = 0.0;
            for (int t = 0; t < dim; ++t) {
                const double diff = f[t] - centroids[static_cast<std::size_t>(j * dim + t)];
                d += diff * diff;
            }
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        out[i] = best_j;
    }
    return out;
}

Grid<double> box_mean(const Grid<double>& plane, int radius) {
    auto reflect = [](int i, int n) {
        if (n == 1) return 0;
        while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
        return i;
    };
    Grid<double> out(plane.height, plane.width);
    const double area = static_cast<double>((2 * radius + 1) * (2 * radius + 1));
    for (int r = 0; r < plane.height; ++r)
        for (int c = 0; c < plane.width; ++c) {
            double s = 0.0;
            for (int dr = -radius; dr <= radius; ++dr)
                for (int dc = -radius; dc <= radius; ++dc)
                    s += plane(reflect(r + dr, plane.height), reflect(c + dc, plane.width));
            out(r, c) = s / area;
        }
    return out;
}

}  // namespace weaklab::serial
