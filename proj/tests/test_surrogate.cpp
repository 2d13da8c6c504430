#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "weaklab/surrogate.hpp"
#include "weaklab/synth.hpp"

using namespace weaklab;

namespace {

// Bright disks on a dark field; nuclei inside, background outside, a thin
// ignored ring at the rim.
TrainingSample disk_sample(int h, int w, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    TrainingSample s{Image2D(h, w, 1, 0.1f), ClusterLabel(h, w, PixelClass::background)};
    for (int k = 0; k < 4; ++k) {
        const double cx = 8 + oracle::unit(rng) * (w - 16), cy = 8 + oracle::unit(rng) * (h - 16);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                const double d = std::hypot(c - cx, r - cy);
                if (d <= 5.0) {
                    s.image.at(r, c) = 0.9f;
                    s.label(r, c) = PixelClass::nuclei;
                } else if (d <= 6.5 && s.label(r, c) != PixelClass::nuclei) {
                    s.label(r, c) = PixelClass::ignored;
                }
            }
    }
    return s;
}

}  // namespace

TEST_CASE("featurize") {
    const Image2D flat(12, 10, 1, 0.4f);
    const FeatureMap f = featurize(flat);
    CHECK(f.dim == kFeaturesPerChannel);
    for (std::size_t i = 0; i < f.pixel_count(); ++i) {
        CHECK(f.pixel(i)[0] == doctest::Approx(0.4));
        CHECK(f.pixel(i)[1] == doctest::Approx(0.4));
        CHECK(f.pixel(i)[2] == doctest::Approx(0.4));
        CHECK(std::abs(f.pixel(i)[3]) <= 1e-7);
    }

    Image2D dot(9, 9, 1, 0.0f);
    dot.at(4, 4) = 0.9f;
    const FeatureMap d = featurize(dot);
    const std::size_t centre = 4 * 9 + 4;
    CHECK(d.pixel(centre)[0] == doctest::Approx(0.9));
    CHECK(d.pixel(centre)[1] == doctest::Approx(0.1));

    CHECK(featurize(Image2D(5, 5, 3)).dim == 12);
    CHECK(feature_names(2).size() == 8);
}

TEST_CASE("box mean matches a direct window average") {
    std::mt19937_64 rng(51);
    for (auto [h, w, radius] : {std::tuple{9, 13, 1}, {20, 7, 3}, {4, 4, 3}, {1, 6, 1}}) {
        Grid<double> plane(h, w);
        for (auto& v : plane.data) v = oracle::unit(rng);
        const auto fast = box_mean(plane, radius);
        const auto ref = oracle::window_mean(plane, radius);
        for (std::size_t i = 0; i < fast.size(); ++i) REQUIRE(std::abs(fast.data[i] - ref.data[i]) <= 1e-12);
    }
}

TEST_CASE("zero classifier and bias") {
    PixelClassifier pc = PixelClassifier::zeros(4, 2);
    const ProbMap p = predict(pc, Image2D(6, 6, 1, 0.3f));
    for (double v : p.values) CHECK(v == doctest::Approx(0.5));

    pc.bias = {0.0, 100.0};
    const ProbMap q = predict(pc, Image2D(6, 6, 1, 0.3f));
    for (std::size_t i = 0; i < q.pixel_count(); ++i) CHECK(q.pixel(i)[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(predict(pc, Image2D(6, 6, 3)), InvalidInput);
}

TEST_CASE("training fits a separable scene") {
    const std::vector<TrainingSample> samples{disk_sample(48, 48, 1), disk_sample(48, 48, 2)};
    TrainConfig cfg;
    cfg.weights = {1.0, 1.0, 0.0, 0.0};
    cfg.epochs = 500;
    cfg.learning_rate = 0.1;
    const TrainResult r = train(cfg, samples);
    REQUIRE(r.trace.size() == 501);
    CHECK(r.trace.back().total < 0.05);
    for (std::size_t e = 1; e < r.trace.size(); ++e) REQUIRE(r.trace[e].total < r.trace[e - 1].total);

    const LossBreakdown again = evaluate(r.classifier, samples, cfg.weights);
    CHECK(again.total == doctest::Approx(r.trace.back().total).epsilon(1e-12));

    const ProbMap p = predict(r.classifier, samples[0].image);
    int wrong = 0;
    for (std::size_t i = 0; i < p.pixel_count(); ++i) {
        if (samples[0].label.data[i] == PixelClass::ignored) continue;
        wrong += (p.pixel(i)[1] > 0.5) != (samples[0].label.data[i] == PixelClass::nuclei);
    }
    CHECK(wrong == 0);
}

TEST_CASE("small learning rate gives a non-increasing trace") {
    SceneConfig sc = benchmark_scene_config();
    sc.height = sc.width = 256;
    sc.count = 16;
    const Scene scene = generate_scene(sc);
    const std::vector<TrainingSample> samples{{scene.image, make_cluster_label(scene.image, scene.truth.points)}};
    TrainConfig cfg;
    cfg.learning_rate = 1e-3;
    cfg.epochs = 40;
    const TrainResult r = train(cfg, samples);
    for (std::size_t e = 1; e < r.trace.size(); ++e) REQUIRE(r.trace[e].total <= r.trace[e - 1].total + 1e-12);
}

TEST_CASE("training is deterministic") {
    const std::vector<TrainingSample> samples{disk_sample(32, 32, 4)};
    TrainConfig cfg;
    cfg.epochs = 25;
    const TrainResult a = train(cfg, samples), b = train(cfg, samples);
    CHECK(a.classifier.weights == b.classifier.weights);
    CHECK(a.classifier.bias == b.classifier.bias);
    for (std::size_t e = 0; e < a.trace.size(); ++e) CHECK(a.trace[e].total == b.trace[e].total);
}

TEST_CASE("training errors") {
    const std::vector<TrainingSample> samples{disk_sample(32, 32, 5)};
    TrainConfig cfg;
    cfg.learning_rate = 1e308;
    cfg.epochs = 20;
    CHECK_THROWS_AS(train(cfg, samples), TrainingError);

    TrainConfig ok;
    ok.learning_rate = 0.0;
    CHECK_THROWS_AS(train(ok, samples), InvalidInput);
    CHECK_THROWS_AS(train(TrainConfig{}, {}), InvalidInput);
    TrainingSample mismatched{Image2D(8, 8, 1), ClusterLabel(8, 9)};
    CHECK_THROWS_AS(train(TrainConfig{}, {mismatched}), InvalidInput);
}

TEST_CASE("detect centers") {
    ProbMap p(20, 20, 2);
    for (std::size_t i = 0; i < p.pixel_count(); ++i) p.pixel(i)[0] = 1.0;
    auto paint = [&](int r0, int c0, int side, double v) {
        for (int r = r0; r < r0 + side; ++r)
            for (int c = c0; c < c0 + side; ++c) {
                p.pixel(static_cast<std::size_t>(r * 20 + c))[1] = v;
                p.pixel(static_cast<std::size_t>(r * 20 + c))[0] = 1 - v;
            }
    };
    paint(2, 2, 3, 0.9);
    paint(10, 12, 4, 0.7);
    paint(16, 2, 2, 0.95);
    const PointSet d = detect_centers(p);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == Point{3.0, 3.0});
    CHECK(d[1] == Point{13.5, 11.5});

    CHECK(detect_centers(p, 0.5, 4).size() == 3);
    CHECK(detect_centers(p, 0.8).size() == 1);
    CHECK(detect_centers(p, 0.9).size() == 0);

    // A radial bump is one component at every threshold below its peak.
    ProbMap bump(21, 21, 2);
    for (int r = 0; r < 21; ++r)
        for (int c = 0; c < 21; ++c) {
            double* px = bump.pixel(static_cast<std::size_t>(r * 21 + c));
            px[1] = std::exp(-((r - 10) * (r - 10) + (c - 10) * (c - 10)) / 18.0);
            px[0] = 1 - px[1];
        }
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const PointSet one = detect_centers(bump, t, 1);
        REQUIRE(one.size() == 1);
        CHECK(one[0] == Point{10.0, 10.0});
    }
    CHECK_THROWS_AS(detect_centers(p, 1.0), InvalidInput);
}

TEST_CASE("mean entropy") {
    ProbMap p(2, 2, 2, 0.5);
    Mask all(2, 2, 1), none(2, 2, 0);
    CHECK(mean_entropy(p, all) == doctest::Approx(std::log(2.0)));
    CHECK(mean_entropy(p, none) == 0.0);
    CHECK_THROWS_AS(mean_entropy(p, Mask(3, 2, 1)), InvalidInput);
}
