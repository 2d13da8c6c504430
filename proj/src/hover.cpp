#include "weaklab/hover.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "weaklab/parallel.hpp"

namespace weaklab {

namespace {

constexpr int kDr[4] = {-1, 1, 0, 0};
constexpr int kDc[4] = {0, 0, -1, 1};

// Flood fill from (row, col) over pixels where keep(r, c) holds and the
// output is still 0. Returns the visited pixels.
template <typename Keep>
std::vector<std::size_t> flood(Grid<std::int32_t>& ids, int row, int col, std::int32_t id, Keep keep) {
    std::vector<std::size_t> visited;
    std::deque<PixelIndex> queue{{row, col}};
    ids(row, col) = id;
    while (!queue.empty()) {
        const auto p = queue.front();
        queue.pop_front();
        visited.push_back(ids.index(p.row, p.col));
        for (int d = 0; d < 4; ++d) {
            const int r = p.row + kDr[d];
            const int c = p.col + kDc[d];
            if (!ids.contains(r, c) || ids(r, c) != 0 || !keep(r, c)) continue;
            ids(r, c) = id;
            queue.push_back({r, c});
        }
    }
    return visited;
}

}  // namespace

InstanceMap canonicalize(const Grid<std::int32_t>& ids) {
    std::int32_t max_id = 0;
    for (auto v : ids.data) max_id = std::max(max_id, v);
    std::vector<std::int32_t> remap(static_cast<std::size_t>(max_id) + 1, 0);
    InstanceMap out{Grid<std::int32_t>(ids.height, ids.width, 0), 0};
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto v = ids.data[i];
        if (v <= 0) continue;
        auto& m = remap[static_cast<std::size_t>(v)];
        if (m == 0) m = ++out.count;
        out.id.data[i] = m;
    }
    return out;
}

InstanceMap label_instances(const ClusterLabel& label, const PointSet& points) {
    const int h = label.height;
    const int w = label.width;
    Grid<std::int32_t> comp(h, w, 0);
    std::vector<std::vector<std::size_t>> members{{}};
    auto is_nuclei = [&](int r, int c) { return label(r, c) == PixelClass::nuclei; };
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if (is_nuclei(r, c) && comp(r, c) == 0)
                members.push_back(flood(comp, r, c, static_cast<std::int32_t>(members.size()), is_nuclei));

    std::vector<std::vector<std::size_t>> comp_points(members.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto px = pixel_of(points[i], h, w);
        if (const auto id = comp(px.row, px.col); id > 0) comp_points[static_cast<std::size_t>(id)].push_back(i);
    }

    Grid<std::int32_t> ids(h, w, 0);
    std::int32_t next_id = 0;
    for (std::size_t cid = 1; cid < members.size(); ++cid) {
        const auto& owners = comp_points[cid];
        if (owners.empty()) continue;
        if (owners.size() == 1) {
            ++next_id;
            for (auto idx : members[cid]) ids.data[idx] = next_id;
            continue;
        }
        // Partition the component by nearest annotation, then keep the
        // connected piece that holds each annotation's pixel.
        Grid<std::int32_t> owner(h, w, -1);
        for (auto idx : members[cid]) {
            const int r = static_cast<int>(idx / static_cast<std::size_t>(w));
            const int c = static_cast<int>(idx % static_cast<std::size_t>(w));
            double best = std::numeric_limits<double>::infinity();
            std::int32_t best_k = 0;
            for (std::size_t k = 0; k < owners.size(); ++k) {
                const auto& p = points[owners[k]];
                const double dx = c - p.x;
                const double dy = r - p.y;
                const double d = dx * dx + dy * dy;
                if (d < best) {
                    best = d;
                    best_k = static_cast<std::int32_t>(k);
                }
            }
            owner.data[idx] = best_k;
        }
        for (std::size_t k = 0; k < owners.size(); ++k) {
            const auto px = pixel_of(points[owners[k]], h, w);
            if (owner(px.row, px.col) != static_cast<std::int32_t>(k) || ids(px.row, px.col) != 0) continue;
            ++next_id;
            flood(ids, px.row, px.col, next_id,
                  [&](int r, int c) { return owner(r, c) == static_cast<std::int32_t>(k); });
        }
    }
    return canonicalize(ids);
}

HoVerTarget hover_maps(const InstanceMap& instances) {
    const auto& ids = instances.id;
    struct Stats {
        double sx = 0, sy = 0, n = 0;
        double cx = 0, cy = 0, max_dx = 0, max_dy = 0;
    };
    std::vector<Stats> stats(static_cast<std::size_t>(instances.count) + 1);
    for (int r = 0; r < ids.height; ++r)
        for (int c = 0; c < ids.width; ++c)
            if (const auto id = ids(r, c); id > 0) {
                if (id > instances.count) throw InvalidInput("instance id " + std::to_string(id) + " exceeds the instance count");
                auto& s = stats[static_cast<std::size_t>(id)];
                s.sx += c;
                s.sy += r;
                s.n += 1;
            }
    for (auto& s : stats)
        if (s.n > 0) {
            s.cx = s.sx / s.n;
            s.cy = s.sy / s.n;
        }
    for (int r = 0; r < ids.height; ++r)
        for (int c = 0; c < ids.width; ++c)
            if (const auto id = ids(r, c); id > 0) {
                auto& s = stats[static_cast<std::size_t>(id)];
                s.max_dx = std::max(s.max_dx, std::abs(c - s.cx));
                s.max_dy = std::max(s.max_dy, std::abs(r - s.cy));
            }

    HoVerTarget out{Grid<double>(ids.height, ids.width, 0.0), Grid<double>(ids.height, ids.width, 0.0)};
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (int r = 0; r < ids.height; ++r)
        for (int c = 0; c < ids.width; ++c) {
            const auto id = ids(r, c);
            if (id <= 0) continue;
            const auto& s = stats[static_cast<std::size_t>(id)];
            out.h(r, c) = s.max_dx > 0 ? (c - s.cx) / s.max_dx : 0.0;
            out.v(r, c) = s.max_dy > 0 ? (r - s.cy) / s.max_dy : 0.0;
        }
    return out;
}

}  // namespace weaklab
