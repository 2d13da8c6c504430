#pragma once

#include <cstdint>

#include "weaklab/geometry.hpp"
#include "weaklab/weak_labels.hpp"

namespace weaklab {

/// 0 = not an instance, otherwise contiguous ids 1..count.
struct InstanceMap {
    Grid<std::int32_t> id;
    int count = 0;
};

/// Normalized horizontal/vertical offsets to the instance centroid.
struct HoVerTarget {
    Grid<double> h;
    Grid<double> v;
};

/// 4-connected nuclei components that contain at least one annotation.
/// Components holding several annotations are split by nearest annotation,
/// keeping only the connected piece around each annotation pixel.
InstanceMap label_instances(const ClusterLabel& label, const PointSet& points);

/// Renumbers ids in raster first-visit order.
InstanceMap canonicalize(const Grid<std::int32_t>& ids);

HoVerTarget hover_maps(const InstanceMap& instances);

}  // namespace weaklab
