#include "weaklab/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weaklab/parallel.hpp"

namespace weaklab {

double RoiPolygon::signed_area() const noexcept {
    double twice = 0.0;
    for (std::size_t i = 0, n = vertices.size(); i < n; ++i) {
        const Point& a = vertices[i];
        const Point& b = vertices[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

namespace {

bool on_segment(Point p, Point a, Point b) {
    constexpr double eps = 1e-9;
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (std::abs(cross) > eps * std::max(1.0, len)) return false;
    return p.x >= std::min(a.x, b.x) - eps && p.x <= std::max(a.x, b.x) + eps &&
           p.y >= std::min(a.y, b.y) - eps && p.y <= std::max(a.y, b.y) + eps;
}

int orientation(Point a, Point b, Point c) {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return (v > 0) - (v < 0);
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_segment(c, a, b)) || (o2 == 0 && on_segment(d, a, b)) ||
           (o3 == 0 && on_segment(a, c, d)) || (o4 == 0 && on_segment(b, c, d));
}

void validate(const RoiPolygon& roi) {
    const auto& v = roi.vertices;
    if (v.size() < 3) throw InvalidInput("ROI polygon needs at least 3 vertices");
    for (const auto& p : v)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidInput("ROI vertex is not finite");
    if (std::abs(roi.signed_area()) <= 0.0) throw InvalidInput("ROI polygon is degenerate (zero area)");
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent edges share a vertex
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                throw InvalidInput("ROI polygon is self-intersecting (edges " + std::to_string(i) +
                                   " and " + std::to_string(j) + ")");
        }
    }
}

}  // namespace

bool RoiPolygon::contains(Point p) const noexcept {
    bool inside = false;
    for (std::size_t i = 0, n = vertices.size(), j = n - 1; i < n; j = i++) {
        const Point& a = vertices[i];
        const Point& b = vertices[j];
        if (on_segment(p, a, b)) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

Image2D mip(const ImageStack& stack) {
    if (stack.depth < 1 || stack.slice_size() == 0) throw InvalidInput("MIP of an empty stack");
    Image2D out(stack.height, stack.width, stack.channels);
    const auto n = static_cast<std::ptrdiff_t>(stack.slice_size());
    const float* src = stack.data.data();
    float* dst = out.data.data();
    std::copy(src, src + n, dst);
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        float m = dst[i];
        for (int z = 1; z < stack.depth; ++z) m = std::max(m, src[static_cast<std::ptrdiff_t>(z) * n + i]);
        dst[i] = m;
    }
    return out;
}

Image2D apply_roi(const Image2D& image, const RoiPolygon& roi) {
    validate(roi);
    Image2D out = image;
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            if (roi.contains({static_cast<double>(c), static_cast<double>(r)})) continue;
            for (int ch = 0; ch < image.channels; ++ch) out.at(r, c, ch) = 0.0f;
        }
    }
    return out;
}

namespace {
std::vector<int> axis_anchors(int extent, int size, int stride) {
    std::vector<int> anchors;
    int a = 0;
    for (; a + size <= extent; a += stride) anchors.push_back(a);
    if (anchors.back() + size < extent) anchors.push_back(extent - size);
    return anchors;
}
}  // namespace

PatchGrid make_patch_grid(int height, int width, int patch_size, double overlap_fraction) {
    if (patch_size < 1) throw InvalidInput("patch size must be positive");
    if (patch_size > std::min(height, width))
        throw InvalidInput("patch size " + std::to_string(patch_size) + " exceeds the " +
                           std::to_string(width) + "x" + std::to_string(height) + " image");
    if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
        throw InvalidInput("overlap fraction must lie in [0, 1)");
    PatchGrid grid;
    grid.patch_size = patch_size;
    grid.stride = std::max(1, static_cast<int>(std::floor(patch_size * (1.0 - overlap_fraction) + 1e-9)));
    grid.image_height = height;
    grid.image_width = width;
    for (int r : axis_anchors(height, patch_size, grid.stride))
        for (int c : axis_anchors(width, patch_size, grid.stride)) grid.anchors.push_back({r, c});
    return grid;
}

Image2D crop(const Image2D& image, int row, int col, int height, int width) {
    if (row < 0 || col < 0 || row + height > image.height || col + width > image.width)
        throw InvalidInput("crop window leaves the image");
    Image2D out(height, width, image.channels);
    const auto span = static_cast<std::ptrdiff_t>(width) * image.channels;
    for (int r = 0; r < height; ++r) {
        const auto src = image.data.begin() + static_cast<std::ptrdiff_t>(image.offset(row + r, col));
        std::copy(src, src + span, out.data.begin() + static_cast<std::ptrdiff_t>(out.offset(r, 0)));
    }
    return out;
}

PatchSet extract_patches(const Image2D& image, int patch_size, double overlap_fraction) {
    PatchSet set{make_patch_grid(image.height, image.width, patch_size, overlap_fraction), {}};
    set.patches.resize(set.grid.anchors.size());
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (std::size_t i = 0; i < set.grid.anchors.size(); ++i) {
        const auto a = set.grid.anchors[i];
        set.patches[i] = crop(image, a.row, a.col, patch_size, patch_size);
    }
    return set;
}

Image2D stitch(const PatchGrid& grid, const std::vector<Image2D>& patches, int full_height,
               int full_width) {
    if (patches.size() != grid.anchors.size())
        throw InvalidInput("stitch got " + std::to_string(patches.size()) + " patches for " +
                           std::to_string(grid.anchors.size()) + " anchors");
    if (patches.empty()) throw InvalidInput("stitch needs at least one patch");
    const int channels = patches.front().channels;
    Image2D out(full_height, full_width, channels);
    for (std::size_t i = 0; i < patches.size(); ++i) {
        const auto& p = patches[i];
        const auto a = grid.anchors[i];
        if (p.height != grid.patch_size || p.width != grid.patch_size || p.channels != channels)
            throw InvalidInput("patch " + std::to_string(i) + " does not match the grid patch size");
        if (a.row < 0 || a.col < 0 || a.row + p.height > full_height || a.col + p.width > full_width)
            throw InvalidInput("patch " + std::to_string(i) + " falls outside the output image");
        const auto span = static_cast<std::ptrdiff_t>(p.width) * channels;
        for (int r = 0; r < p.height; ++r) {
            const auto src = p.data.begin() + static_cast<std::ptrdiff_t>(p.offset(r, 0));
            std::copy(src, src + span,
                      out.data.begin() + static_cast<std::ptrdiff_t>(out.offset(a.row + r, a.col)));
        }
    }
    return out;
}

Image2D gaussian_mask(const PointSet& points, int height, int width, double sigma) {
    if (!(sigma > 0.0)) throw InvalidInput("Gaussian sigma must be positive");
    Image2D out(height, width, 1);
    const double two_sigma2 = 2.0 * sigma * sigma;
    // Beyond this radius every kernel value is below the storage floor.
    const double reach = std::sqrt(two_sigma2 * std::log(1.0 / kGaussianFloor)) + 1.0;
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (int r = 0; r < height; ++r) {
        for (const auto& p : points) {
            const double dy = r - p.y;
            if (std::abs(dy) > reach) continue;
            const int c0 = std::max(0, static_cast<int>(std::floor(p.x - reach)));
            const int c1 = std::min(width - 1, static_cast<int>(std::ceil(p.x + reach)));
            for (int c = c0; c <= c1; ++c) {
                const double dx = c - p.x;
                double v = std::exp(-(dx * dx + dy * dy) / two_sigma2);
                if (v < kGaussianFloor) v = 0.0;
                float& dst = out.at(r, c);
                dst = std::max(dst, static_cast<float>(v));
            }
        }
    }
    return out;
}

}  // namespace weaklab
