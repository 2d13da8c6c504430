#include "weaklab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace weaklab {

namespace {

constexpr int kMaxAttempts = 10000;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

struct Nucleus {
    double x, y, r;
};

void validate(const SceneConfig& cfg) {
    if (cfg.height <= 0 || cfg.width <= 0) throw InvalidInput("scene dimensions must be positive");
    if (cfg.count < 0) throw InvalidInput("nucleus count must be non-negative");
    if (!(cfg.radius_min > 0.0) || cfg.radius_min > cfg.radius_max)
        throw InvalidInput("radius range must satisfy 0 < min <= max");
    if (!(cfg.touching_fraction >= 0.0 && cfg.touching_fraction <= 1.0))
        throw InvalidInput("touching fraction must lie in [0, 1]");
    if (cfg.noise_sigma < 0.0 || cfg.edge_sigma <= 0.0) throw InvalidInput("noise and edge sigma must be non-negative/positive");
}

}  // namespace

SceneConfig benchmark_scene_config() { return SceneConfig{}; }

Scene generate_scene(const SceneConfig& cfg) {
    validate(cfg);
    std::mt19937_64 rng(cfg.seed);
    const int touching = static_cast<int>(std::lround(cfg.touching_fraction * cfg.count));
    const int isolated = cfg.count - touching;
    if (touching > isolated) throw GenerationError("touching fraction too high: every touching nucleus needs its own isolated partner");
    const double margin = cfg.radius_max + 2.0;
    if (2 * margin >= std::min(cfg.width, cfg.height)) throw GenerationError("image too small for the radius range");

    std::vector<Nucleus> nuclei;
    std::vector<std::pair<int, int>> pairs;
    auto clear_of_others = [&](double x, double y, int except) {
        for (std::size_t j = 0; j < nuclei.size(); ++j) {
            if (static_cast<int>(j) == except) continue;
            if (std::hypot(nuclei[j].x - x, nuclei[j].y - y) < cfg.min_separation) return false;
        }
        return true;
    };

    for (int i = 0; i < isolated; ++i) {
        const double r = uniform(rng, cfg.radius_min, cfg.radius_max);
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            const double x = uniform(rng, margin, cfg.width - 1 - margin);
            const double y = uniform(rng, margin, cfg.height - 1 - margin);
            if (!clear_of_others(x, y, -1)) continue;
            nuclei.push_back({x, y, r});
            placed = true;
        }
        if (!placed)
            throw GenerationError("could not place nucleus " + std::to_string(i) + " with minimum center separation " +
                                  std::to_string(cfg.min_separation) + " px after " + std::to_string(kMaxAttempts) + " attempts");
    }
    // Each touching nucleus overlaps a distinct isolated partner by ~1 px.
    for (int t = 0; t < touching; ++t) {
        const double r = uniform(rng, cfg.radius_min, cfg.radius_max);
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            const int partner = static_cast<int>(rng() % static_cast<std::uint64_t>(isolated));
            const auto& p = nuclei[static_cast<std::size_t>(partner)];
            const double angle = uniform(rng, 0.0, 2.0 * M_PI);
            const double d = p.r + r - 1.0;
            const double x = p.x + d * std::cos(angle);
            const double y = p.y + d * std::sin(angle);
            if (x < margin || y < margin || x > cfg.width - 1 - margin || y > cfg.height - 1 - margin) continue;
            if (!clear_of_others(x, y, partner)) continue;
            bool partner_free = true;
            for (const auto& pr : pairs) partner_free = partner_free && pr.first != partner;
            if (!partner_free) continue;
            pairs.emplace_back(partner, static_cast<int>(nuclei.size()));
            nuclei.push_back({x, y, r});
            placed = true;
        }
        if (!placed)
            throw GenerationError("could not place touching nucleus " + std::to_string(t) +
                                  " without violating the separation of third nuclei after " +
                                  std::to_string(kMaxAttempts) + " attempts");
    }

    Scene scene;
    scene.image = Image2D(cfg.height, cfg.width, 1, 0.0f);
    Grid<double> signal(cfg.height, cfg.width, 0.0);
    Grid<double> best_rel(cfg.height, cfg.width, 2.0);
    scene.truth.instances = InstanceMap{Grid<std::int32_t>(cfg.height, cfg.width, 0), static_cast<int>(nuclei.size())};
    const double reach_extra = 5.0 * cfg.edge_sigma;
    for (std::size_t n = 0; n < nuclei.size(); ++n) {
        const auto& nu = nuclei[n];
        const double reach = nu.r + reach_extra;
        const int r0 = std::max(0, static_cast<int>(std::floor(nu.y - reach)));
        const int r1 = std::min(cfg.height - 1, static_cast<int>(std::ceil(nu.y + reach)));
        const int c0 = std::max(0, static_cast<int>(std::floor(nu.x - reach)));
        const int c1 = std::min(cfg.width - 1, static_cast<int>(std::ceil(nu.x + reach)));
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c) {
                const double d = std::hypot(c - nu.x, r - nu.y);
                const double rim = d - nu.r;
                const double v = rim <= 0.0 ? cfg.core_level
                                            : cfg.core_level * std::exp(-rim * rim / (2.0 * cfg.edge_sigma * cfg.edge_sigma));
                signal(r, c) = std::max(signal(r, c), v);
                const double rel = d / nu.r;
                if (rel <= 1.0 && rel < best_rel(r, c)) {
                    best_rel(r, c) = rel;
                    scene.truth.instances.id(r, c) = static_cast<std::int32_t>(n + 1);
                }
            }
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int r = 0; r < cfg.height; ++r)
        for (int c = 0; c < cfg.width; ++c) {
            double v = cfg.background_level + signal(r, c);
            if (cfg.noise_sigma > 0.0) v += cfg.noise_sigma * gauss(rng);
            scene.image.at(r, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }

    std::vector<Point> centers;
    for (const auto& nu : nuclei) {
        centers.push_back({nu.x, nu.y});
        scene.truth.radii.push_back(nu.r);
    }
    scene.truth.points = PointSet(std::move(centers));
    scene.truth.touching_pairs = std::move(pairs);
    return scene;
}

PointSet ideal_detections(const GroundTruth& truth, const DetectionNoise& noise) {
    for (double rate : {noise.drop_rate, noise.spurious_rate})
        if (!(rate >= 0.0 && rate <= 1.0)) throw InvalidInput("rates must lie in [0, 1]");
    if (noise.jitter_sigma < 0.0) throw InvalidInput("jitter sigma must be non-negative");
    const int h = truth.instances.id.height;
    const int w = truth.instances.id.width;
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto clamp_x = [&](double x) { return std::clamp(x, 0.0, std::nextafter(static_cast<double>(w), 0.0)); };
    auto clamp_y = [&](double y) { return std::clamp(y, 0.0, std::nextafter(static_cast<double>(h), 0.0)); };

    std::vector<Point> out;
    for (const auto& p : truth.points) {
        const double dx = noise.jitter_sigma * gauss(rng);
        const double dy = noise.jitter_sigma * gauss(rng);
        const double u = uniform(rng, 0.0, 1.0);
        if (u < noise.drop_rate) continue;
        out.push_back({clamp_x(p.x + dx), clamp_y(p.y + dy)});
    }
    for (std::size_t i = 0; i < truth.points.size(); ++i) {
        const double u = uniform(rng, 0.0, 1.0);
        if (u >= noise.spurious_rate) continue;
        const double x = uniform(rng, 0.0, w);
        const double y = uniform(rng, 0.0, h);
        out.push_back({clamp_x(x), clamp_y(y)});
    }
    return PointSet(std::move(out));
}

}  // namespace weaklab
