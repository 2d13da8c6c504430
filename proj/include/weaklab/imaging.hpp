#pragma once

#include <vector>

#include "weaklab/geometry.hpp"
#include "weaklab/grid.hpp"

namespace weaklab {

/// Closed simple polygon in pixel coordinates.
struct RoiPolygon {
    std::vector<Point> vertices;

    /// Signed shoelace area.
    double signed_area() const noexcept;
    /// Even-odd containment; points on an edge count as inside.
    bool contains(Point p) const noexcept;
};

struct PatchAnchor {
    int row = 0;
    int col = 0;
    friend bool operator==(const PatchAnchor&, const PatchAnchor&) = default;
};

struct PatchGrid {
    int patch_size = 256;
    int stride = 230;
    int image_height = 0;
    int image_width = 0;
    std::vector<PatchAnchor> anchors;  // row-major order
};

/// Per-pixel maximum across slices.
Image2D mip(const ImageStack& stack);

/// Zero every channel of pixels whose centers fall outside `roi`.
Image2D apply_roi(const Image2D& image, const RoiPolygon& roi);

/// Anchors 0, stride, 2*stride, ... per axis with the last anchor clamped so
/// the final patch ends on the image edge. stride = floor(size * (1 - overlap)).
PatchGrid make_patch_grid(int height, int width, int patch_size, double overlap_fraction);

struct PatchSet {
    PatchGrid grid;
    std::vector<Image2D> patches;
};
PatchSet extract_patches(const Image2D& image, int patch_size, double overlap_fraction);

Image2D crop(const Image2D& image, int row, int col, int height, int width);

/// Reassembles patches; on overlaps the later patch in anchor order wins.
Image2D stitch(const PatchGrid& grid, const std::vector<Image2D>& patches, int full_height,
               int full_width);

/// Values below this are stored as exactly 0 in Gaussian masks.
inline constexpr double kGaussianFloor = 1e-4;

/// Max-combined isotropic Gaussian bumps, peak 1 at each point. Single channel;
/// an empty point set gives an all-zero mask.
Image2D gaussian_mask(const PointSet& points, int height, int width, double sigma);

}  // namespace weaklab
