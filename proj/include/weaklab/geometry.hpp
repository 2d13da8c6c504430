#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "weaklab/grid.hpp"

namespace weaklab {

/// Pixel-space coordinate. Pixel (row r, col c) has its center at (x=c, y=r).
struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

struct PixelIndex {
    int row = 0;
    int col = 0;
    friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

/// Pixel whose center is nearest to `p`, clamped to the raster.
PixelIndex pixel_of(Point p, int height, int width) noexcept;

/// Annotated nucleus centers. Construction rejects non-finite coordinates and
/// points closer than 1e-6 px to each other.
class PointSet {
public:
    static constexpr double kMinSeparation = 1e-6;

    PointSet() = default;
    explicit PointSet(std::vector<Point> points);

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Point> points() const noexcept { return points_; }
    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }

    /// Throws InvalidInput unless every point lies in [0,width) x [0,height).
    void require_within(int height, int width) const;

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::vector<Point> points_;
};

/// Per-pixel index of the nearest seed.
using VoronoiLabel = Grid<std::int32_t>;

/// Per-pixel Euclidean distance (px) to the nearest seed.
using DistanceMap = Grid<double>;

/// Nearest-seed index and distance for every pixel center. Ties go to the
/// lowest seed index. Rows are processed in parallel.
struct NearestSite {
    VoronoiLabel index;
    DistanceMap distance;
};
NearestSite nearest_site_transform(const PointSet& points, int height, int width);

VoronoiLabel rasterize_voronoi(const PointSet& points, int height, int width);

/// Boundary pixels of the cell partition (any 4-neighbor in another cell),
/// grown by a disk of radius `width_px - 1`. Width 1 is the raw two-sided
/// boundary band.
Mask voronoi_edges(const VoronoiLabel& vlabel, int width_px);

DistanceMap distance_map(const PointSet& points, int height, int width);

DistanceMap clip_distance(const DistanceMap& dmap, double cap);

/// Pixels whose centers lie within `radius` of any point.
Mask dilate_points(const PointSet& points, double radius, int height, int width);

/// Binary dilation by a Euclidean disk of integer radius.
Mask dilate_disk(const Mask& mask, int radius);

}  // namespace weaklab
