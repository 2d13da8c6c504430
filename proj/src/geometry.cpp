#include "weaklab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "weaklab/parallel.hpp"

namespace weaklab {

PixelIndex pixel_of(Point p, int height, int width) noexcept {
    const int col = static_cast<int>(std::floor(p.x + 0.5));
    const int row = static_cast<int>(std::floor(p.y + 0.5));
    return {std::clamp(row, 0, std::max(height - 1, 0)), std::clamp(col, 0, std::max(width - 1, 0))};
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
    for (const auto& p : points_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw InvalidInput("point coordinates must be finite");
    }
    // Sort a copy by x so the duplicate scan only looks at a narrow band.
    std::vector<std::size_t> order(points_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points_[a].x < points_[b].x; });
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Point& a = points_[order[i]];
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const Point& b = points_[order[j]];
            if (b.x - a.x >= kMinSeparation) break;
            if (std::hypot(b.x - a.x, b.y - a.y) < kMinSeparation)
                throw InvalidInput("duplicate annotation points at (" + std::to_string(a.x) + ", " +
                                   std::to_string(a.y) + ")");
        }
    }
}

void PointSet::require_within(int height, int width) const {
    for (const auto& p : points_) {
        if (p.x < 0.0 || p.y < 0.0 || p.x >= width || p.y >= height)
            throw InvalidInput("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                               ") lies outside the " + std::to_string(width) + "x" +
                               std::to_string(height) + " raster");
    }
}

namespace {

// Lower envelope of the parabolas f_i(x) = (x - a_i)^2 + h_i for one raster
// row, where a_i is the seed's x and h_i its squared vertical offset. Values
// are always re-evaluated with the same expression a brute-force scan uses,
// so the envelope only needs to nominate candidates near each pixel.
class RowEnvelope {
public:
    explicit RowEnvelope(std::span<const Point> seeds, std::span<const std::size_t> by_x, int width)
        : seeds_(seeds), by_x_(by_x), tol_(1e-9 * (1.0 + width)) {
        sites_.reserve(seeds.size());
        bounds_.reserve(seeds.size() + 1);
        heights_.resize(seeds.size());
    }

    void solve(int row, std::span<std::int32_t> index_out, std::span<double> dist_out) {
        build(row);
        const int width = static_cast<int>(index_out.size());
        std::size_t k = 0;
        std::size_t note = 0;
        for (int col = 0; col < width; ++col) {
            const double x = col;
            while (k + 1 < sites_.size() && bounds_[k + 1] < x) ++k;
            while (note < notes_.size() && notes_[note].pos < x - tol_) ++note;

            best_value_ = std::numeric_limits<double>::infinity();
            best_index_ = std::numeric_limits<std::int32_t>::max();
            consider(sites_[k], x);
            for (std::size_t j = k; j > 0 && x - bounds_[j] <= tol_; --j) consider(sites_[j - 1], x);
            for (std::size_t j = k + 1; j < sites_.size() && bounds_[j] - x <= tol_; ++j)
                consider(sites_[j], x);
            for (std::size_t n = note; n < notes_.size() && notes_[n].pos <= x + tol_; ++n)
                consider(notes_[n].site, x);

            index_out[col] = best_index_;
            dist_out[col] = std::sqrt(best_value_);
        }
    }

private:
    struct Note {
        double pos;
        std::size_t site;
    };

    void build(int row) {
        for (std::size_t i = 0; i < seeds_.size(); ++i) {
            const double dy = row - seeds_[i].y;
            heights_[i] = dy * dy;
        }
        sites_.clear();
        bounds_.clear();
        notes_.clear();
        bounds_.push_back(-std::numeric_limits<double>::infinity());

        for (std::size_t q : by_x_) {
            if (!sites_.empty()) {
                const std::size_t top = sites_.back();
                if (seeds_[top].x == seeds_[q].x) {
                    // Same vertex column: the lower parabola dominates everywhere,
                    // and on an exact tie the earlier (lower-index) seed is kept.
                    if (heights_[q] >= heights_[top]) continue;
                    if (sites_.size() == 1) {
                        sites_[0] = q;
                        continue;
                    }
                    sites_.pop_back();
                    bounds_.pop_back();
                }
            }
            if (sites_.empty()) {
                sites_.push_back(q);
                continue;
            }
            double s = intersect(sites_.back(), q);
            while (s <= bounds_.back()) {
                // The top site only touched the envelope at its left bound.
                if (bounds_.back() - s <= tol_) notes_.push_back({bounds_.back(), sites_.back()});
                sites_.pop_back();
                bounds_.pop_back();
                s = intersect(sites_.back(), q);
            }
            sites_.push_back(q);
            bounds_.push_back(s);
        }
        std::sort(notes_.begin(), notes_.end(),
                  [](const Note& a, const Note& b) { return a.pos < b.pos; });
    }

    double intersect(std::size_t i, std::size_t q) const {
        const double ai = seeds_[i].x;
        const double aq = seeds_[q].x;
        return ((heights_[q] + aq * aq) - (heights_[i] + ai * ai)) / (2.0 * (aq - ai));
    }

    void consider(std::size_t site, double x) {
        const double dx = x - seeds_[site].x;
        const double value = dx * dx + heights_[site];
        const auto idx = static_cast<std::int32_t>(site);
        if (value < best_value_ || (value == best_value_ && idx < best_index_)) {
            best_value_ = value;
            best_index_ = idx;
        }
    }

    std::span<const Point> seeds_;
    std::span<const std::size_t> by_x_;
    double tol_;
    std::vector<double> heights_;
    std::vector<std::size_t> sites_;
    std::vector<double> bounds_;  // bounds_[k] is the left end of sites_[k]'s interval
    std::vector<Note> notes_;
    double best_value_ = 0.0;
    std::int32_t best_index_ = 0;
};

void require_seeds(const PointSet& points, int height, int width) {
    if (points.empty()) throw InvalidInput("at least one seed point is required");
    if (height <= 0 || width <= 0) throw InvalidInput("raster dimensions must be positive");
}

}  // namespace

NearestSite nearest_site_transform(const PointSet& points, int height, int width) {
    require_seeds(points, height, width);
    NearestSite out{VoronoiLabel(height, width), DistanceMap(height, width)};

    std::vector<std::size_t> by_x(points.size());
    std::iota(by_x.begin(), by_x.end(), std::size_t{0});
    std::stable_sort(by_x.begin(), by_x.end(),
                     [&](std::size_t a, std::size_t b) { return points[a].x < points[b].x; });

#pragma omp parallel num_threads(configured_threads())
    {
        RowEnvelope envelope(points.points(), by_x, width);
#pragma omp for schedule(static)
        for (int row = 0; row < height; ++row) envelope.solve(row, out.index.row(row), out.distance.row(row));
    }
    return out;
}

VoronoiLabel rasterize_voronoi(const PointSet& points, int height, int width) {
    return nearest_site_transform(points, height, width).index;
}

DistanceMap distance_map(const PointSet& points, int height, int width) {
    return nearest_site_transform(points, height, width).distance;
}

DistanceMap clip_distance(const DistanceMap& dmap, double cap) {
    if (!(cap > 0.0)) throw InvalidInput("distance cap must be positive");
    DistanceMap out = dmap;
    for (double& d : out.data) d = std::min(d, cap);
    return out;
}

Mask dilate_disk(const Mask& mask, int radius) {
    if (radius < 0) throw InvalidInput("dilation radius must be non-negative");
    if (radius == 0) return mask;
    std::vector<PixelIndex> offsets;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) offsets.push_back({dy, dx});

    Mask out(mask.height, mask.width, 0);
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            for (const auto& o : offsets) {
                const int rr = r + o.row;
                const int cc = c + o.col;
                if (mask.contains(rr, cc) && mask(rr, cc)) {
                    out(r, c) = 1;
                    break;
                }
            }
        }
    }
    return out;
}

Mask voronoi_edges(const VoronoiLabel& vlabel, int width_px) {
    if (width_px < 1) throw InvalidInput("edge width must be at least 1");
    Mask edges(vlabel.height, vlabel.width, 0);
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (int r = 0; r < vlabel.height; ++r) {
        for (int c = 0; c < vlabel.width; ++c) {
            const auto cell = vlabel(r, c);
            const bool edge = (r > 0 && vlabel(r - 1, c) != cell) ||
                              (r + 1 < vlabel.height && vlabel(r + 1, c) != cell) ||
                              (c > 0 && vlabel(r, c - 1) != cell) ||
                              (c + 1 < vlabel.width && vlabel(r, c + 1) != cell);
            edges(r, c) = edge ? 1 : 0;
        }
    }
    return dilate_disk(edges, width_px - 1);
}

Mask dilate_points(const PointSet& points, double radius, int height, int width) {
    if (!(radius >= 0.0)) throw InvalidInput("dilation radius must be non-negative");
    Mask out(height, width, 0);
    const double r2 = radius * radius;
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (int r = 0; r < height; ++r) {
        for (const auto& p : points) {
            const double dy = r - p.y;
            if (std::abs(dy) > radius) continue;
            const int c0 = std::max(0, static_cast<int>(std::ceil(p.x - radius)));
            const int c1 = std::min(width - 1, static_cast<int>(std::floor(p.x + radius)));
            for (int c = c0; c <= c1; ++c) {
                const double dx = c - p.x;
                if (dx * dx + dy * dy <= r2) out(r, c) = 1;
            }
        }
    }
    // The pixel holding a point always belongs to its disk, even at radius 0.
    for (const auto& p : points) {
        const auto px = pixel_of(p, height, width);
        out(px.row, px.col) = 1;
    }
    return out;
}

}  // namespace weaklab
