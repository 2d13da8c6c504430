#pragma once

// Single-threaded reference kernels. They are straightforward loops kept for
// cross-checking the OpenMP kernels and for the benchmark baseline.

#include <vector>

#include "weaklab/geometry.hpp"
#include "weaklab/grid.hpp"
#include "weaklab/weak_labels.hpp"

namespace weaklab::serial {

Image2D mip(const ImageStack& stack);

/// Scans every seed for every pixel.
NearestSite nearest_site_transform(const PointSet& points, int height, int width);

Image2D gaussian_mask(const PointSet& points, int height, int width, double sigma);

std::vector<int> assign_to_centroids(const FeatureMap& features, const std::vector<double>& centroids);

/// Direct (2r+1)^2 window mean with reflect-101 borders.
Grid<double> box_mean(const Grid<double>& plane, int radius);

}  // namespace weaklab::serial
