#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "weaklab/diag.hpp"
#include "weaklab/geometry.hpp"
#include "weaklab/hover.hpp"
#include "weaklab/imaging.hpp"
#include "weaklab/io.hpp"
#include "weaklab/losses.hpp"
#include "weaklab/metrics.hpp"
#include "weaklab/pipeline.hpp"
#include "weaklab/surrogate.hpp"
#include "weaklab/synth.hpp"
#include "weaklab/weak_labels.hpp"

namespace fs = std::filesystem;
using namespace weaklab;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

void set_threads(const char* value) {
    if (value) setenv("WEAKLAB_THREADS", value, 1);
    else unsetenv("WEAKLAB_THREADS");
}

// Detection scene: annotations are nucleus centers at least `min_sep` apart
// in a 100x100 field; detections are jittered, partially dropped copies plus
// spurious points, at most 12 in total.
std::pair<PointSet, PointSet> detection_scene(std::mt19937_64& rng, double min_sep) {
    std::normal_distribution<double> gauss(0.0, 3.0);
    const int na = oracle::below(rng, 11);
    std::vector<Point> anns;
    for (int attempt = 0; static_cast<int>(anns.size()) < na && attempt < 10000; ++attempt) {
        const Point p{oracle::unit(rng) * 100, oracle::unit(rng) * 100};
        bool ok = true;
        for (const auto& q : anns) ok = ok && std::hypot(p.x - q.x, p.y - q.y) >= min_sep;
        if (ok) anns.push_back(p);
    }
    std::vector<Point> dets;
    for (const auto& a : anns)
        if (oracle::unit(rng) < 0.85) dets.push_back({std::clamp(a.x + gauss(rng), 0.0, 99.999), std::clamp(a.y + gauss(rng), 0.0, 99.999)});
    const int spurious = oracle::below(rng, 13 - static_cast<int>(dets.size()));
    for (int i = 0; i < spurious; ++i) dets.push_back({oracle::unit(rng) * 100, oracle::unit(rng) * 100});
    return {PointSet(std::move(dets)), PointSet(std::move(anns))};
}

// 1. Greedy matching vs exhaustive optimum, plus the F1 identity.
void metrics_exactness(Outcome& out) {
    std::mt19937_64 rng(1001);
    int agree = 0, disagree = 0, max_gap = 0;
    double worst_identity = 0.0;
    bool conserved = true;
    for (int scene = 0; scene < 200; ++scene) {
        const auto [dets, anns] = detection_scene(rng, 11.0);
        const MatchReport rep = match_detections(dets, anns, {11.0});
        const oracle::Matching best = oracle::optimal_matching(dets, anns, 11.0);
        conserved = conserved && rep.tp + rep.fp == static_cast<int>(dets.size()) && rep.tp + rep.fn == static_cast<int>(anns.size());
        if (rep.tp == best.tp) {
            ++agree;
        } else {
            ++disagree;
            max_gap = std::max(max_gap, best.tp - rep.tp);
            std::cerr << "  metrics: scene " << scene << " greedy tp " << rep.tp << " optimal tp " << best.tp << '\n';
        }
        const auto s = prf1(rep);
        if (s.precision + s.recall > 0)
            worst_identity = std::max(worst_identity, std::abs(s.f1 - 2 * s.precision * s.recall / (s.precision + s.recall)));
    }
    // Unconstrained uniform clouds, reported but not gated.
    std::mt19937_64 stress_rng(1002);
    int stress_disagree = 0, stress_gap = 0;
    for (int scene = 0; scene < 200; ++scene) {
        const PointSet anns = oracle::random_points(stress_rng, oracle::below(stress_rng, 11), 48, 48);
        const PointSet dets = oracle::random_points(stress_rng, oracle::below(stress_rng, 13), 48, 48);
        const int gap = oracle::optimal_matching(dets, anns, 11.0).tp - match_detections(dets, anns, {11.0}).tp;
        stress_disagree += gap != 0;
        stress_gap = std::max(stress_gap, gap);
    }
    out.check(conserved, "tp+fp / tp+fn conservation");
    out.check(max_gap <= 1, "greedy/optimal tp gap <= 1");
    out.check(worst_identity <= 1e-12, "F1 = 2PR/(P+R) within 1e-12");
    out.detail << "agree " << agree << "/200, disagreements " << disagree << " (max tp gap " << max_gap
               << "), worst |F1-2PR/(P+R)| " << worst_identity << "; uniform 48x48 stress set: " << stress_disagree
               << "/200 disagree, max gap " << stress_gap << " (not gated)";
}

// 2. Voronoi labels and distance maps against exhaustive loops.
void geometry_oracles(Outcome& out) {
    std::mt19937_64 rng(2002);
    std::size_t pixels = 0, label_mismatch = 0;
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const int n = 1 + oracle::below(rng, 10);
        const PointSet pts = oracle::random_points(rng, n, 64, 64, inst % 2 == 1);
        const auto lab = rasterize_voronoi(pts, 64, 64);
        const auto dist = distance_map(pts, 64, 64);
        const auto ref_lab = oracle::nearest_seed(pts, 64, 64);
        const auto ref_dist = oracle::all_pairs_min(pts, 64, 64);
        for (std::size_t i = 0; i < lab.size(); ++i) {
            ++pixels;
            label_mismatch += lab.data[i] != ref_lab.data[i];
            worst = std::max(worst, std::abs(dist.data[i] - ref_dist.data[i]));
        }
    }
    out.check(label_mismatch == 0, "Voronoi labels exact");
    out.check(worst <= 1e-6, "distance within 1e-6");
    out.detail << "label mismatches " << label_mismatch << "/" << pixels << ", max |d - d_ref| " << worst;
}

// 3. Analytic loss gradients vs central differences.
void gradient_checks(Outcome& out) {
    std::mt19937_64 rng(3003);
    std::normal_distribution<double> gauss(0.0, 1.0);
    constexpr int H = 4, W = 4, M = 3;
    double worst_ce = 0, worst_dice = 0, worst_mse = 0, worst_ent = 0;
    for (int trial = 0; trial < 20; ++trial) {
        LogitMap logits(H, W, M);
        for (auto& v : logits.values) v = gauss(rng);
        TargetMap target(H, W);
        RegionMask mask{Mask(H, W, 0), Mask(H, W, 0)};
        for (std::size_t i = 0; i < target.size(); ++i) {
            target.data[i] = static_cast<std::uint8_t>(oracle::below(rng, M));
            const int region = oracle::below(rng, 3);  // labeled, ignored, neither
            mask.labeled.data[i] = region == 0;
            mask.ignored.data[i] = region == 1;
        }
        mask.labeled.data[static_cast<std::size_t>(trial % 16)] = 1;
        mask.ignored.data[static_cast<std::size_t>(trial % 16)] = 0;
        mask.ignored.data[static_cast<std::size_t>((trial + 7) % 16)] = 1;
        mask.labeled.data[static_cast<std::size_t>((trial + 7) % 16)] = 0;
        target.data[static_cast<std::size_t>(trial % 16)] = kForegroundClass;

        auto run = [&](const std::function<LossValue(const ProbMap&)>& loss) {
            const auto analytic = loss(softmax(logits)).grad.values;
            auto numeric = oracle::numeric_gradient(logits.values, [&] { return loss(softmax(logits)).value; });
            return oracle::relative_error(analytic, numeric);
        };
        worst_ce = std::max(worst_ce, run([&](const ProbMap& p) { return cross_entropy(p, target, mask); }));
        worst_dice = std::max(worst_dice, run([&](const ProbMap& p) { return dice_loss(p, target, mask); }));
        worst_ent = std::max(worst_ent, run([&](const ProbMap& p) { return entropy_min(p, mask); }));

        HoVerTarget pred{Grid<double>(H, W), Grid<double>(H, W)}, tgt{Grid<double>(H, W), Grid<double>(H, W)};
        for (auto* g : {&pred.h, &pred.v, &tgt.h, &tgt.v})
            for (auto& v : g->data) v = gauss(rng);
        const auto analytic = mse_loss(pred, tgt, mask);
        std::vector<double> flat(pred.h.data);
        flat.insert(flat.end(), pred.v.data.begin(), pred.v.data.end());
        std::vector<double> a(analytic.grad.h.data);
        a.insert(a.end(), analytic.grad.v.data.begin(), analytic.grad.v.data.end());
        auto numeric = oracle::numeric_gradient(flat, [&] {
            HoVerTarget p{Grid<double>(H, W), Grid<double>(H, W)};
            std::copy(flat.begin(), flat.begin() + H * W, p.h.data.begin());
            std::copy(flat.begin() + H * W, flat.end(), p.v.data.begin());
            return mse_loss(p, tgt, mask).value;
        });
        worst_mse = std::max(worst_mse, oracle::relative_error(a, numeric));
    }
    const double u2[2] = {0.5, 0.5}, u3[3] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    const double e2 = std::abs(entropy(u2, 2) - std::log(2.0)), e3 = std::abs(entropy(u3, 3) - std::log(3.0));
    out.check(worst_ce <= 1e-5, "cross-entropy gradient");
    out.check(worst_dice <= 1e-5, "dice gradient");
    out.check(worst_mse <= 1e-5, "mse gradient");
    out.check(worst_ent <= 1e-5, "entropy gradient");
    out.check(e2 <= 1e-9 && e3 <= 1e-9, "uniform entropy ln2 / ln3");
    out.detail << "max rel err ce " << worst_ce << ", dice " << worst_dice << ", mse " << worst_mse << ", entropy "
               << worst_ent << "; |H2-ln2| " << e2 << ", |H3-ln3| " << e3;
}

// 4. Composite total = weighted sum; w_ent = 0 ignores ignored-pixel predictions.
void composite_contract(Outcome& out) {
    std::mt19937_64 rng(4004);
    std::normal_distribution<double> gauss(0.0, 2.0);
    constexpr int H = 8, W = 8, M = 2;
    double worst_sum = 0;
    bool invariant = true;
    for (int trial = 0; trial < 20; ++trial) {
        LogitMap logits(H, W, M);
        for (auto& v : logits.values) v = gauss(rng);
        CompositeTargets targets{TargetMap(H, W), {Grid<double>(H, W), Grid<double>(H, W)}};
        HoVerTarget pred{Grid<double>(H, W), Grid<double>(H, W)};
        RegionMask mask{Mask(H, W, 0), Mask(H, W, 0)};
        for (std::size_t i = 0; i < targets.classes.size(); ++i) {
            targets.classes.data[i] = static_cast<std::uint8_t>(oracle::below(rng, M));
            const bool labeled = oracle::below(rng, 2) == 0;
            mask.labeled.data[i] = labeled;
            mask.ignored.data[i] = !labeled;
            targets.hover.h.data[i] = gauss(rng);
            targets.hover.v.data[i] = gauss(rng);
            pred.h.data[i] = gauss(rng);
            pred.v.data[i] = gauss(rng);
        }
        const LossWeights w{1.0, 1.0, 1.0, 0.5};
        const auto r = composite_loss(logits, &pred, targets, mask, w);
        const auto& b = r.breakdown;
        worst_sum = std::max(worst_sum, std::abs(b.total - (w.ce * b.ce + w.dice * b.dice + w.mse * b.mse + w.entropy * b.entropy)));

        const LossWeights w0{1.0, 1.0, 1.0, 0.0};
        const auto base = composite_loss(logits, &pred, targets, mask, w0);
        LogitMap perturbed = logits;
        for (std::size_t i = 0; i < mask.ignored.size(); ++i)
            if (mask.ignored.data[i])
                for (int k = 0; k < M; ++k) perturbed.pixel(i)[k] += 50.0 * gauss(rng);
        const auto moved = composite_loss(perturbed, &pred, targets, mask, w0);
        invariant = invariant && moved.breakdown.total == base.breakdown.total && moved.logit_grad.values == base.logit_grad.values;
    }
    out.check(worst_sum <= 1e-10, "total equals weighted sum");
    out.check(invariant, "w_ent = 0 invariant to ignored-pixel perturbation");
    out.detail << "max |total - sum w_i L_i| " << worst_sum << ", ignored-pixel invariance " << (invariant ? "exact" : "broken");
}

struct Benchmark {
    Scene scene;
    ClusterLabel label;
};

const Benchmark& benchmark() {
    static const Benchmark b = [] {
        Benchmark out;
        out.scene = generate_scene(benchmark_scene_config());
        out.label = make_cluster_label(out.scene.image, out.scene.truth.points);
        return out;
    }();
    return b;
}

// 5. Cluster labels on the benchmark scene, single-threaded.
void cluster_label_end_to_end(Outcome& out) {
    set_threads("1");
    const auto t0 = std::chrono::steady_clock::now();
    const Scene scene = generate_scene(benchmark_scene_config());
    const ClusterLabel label = make_cluster_label(scene.image, scene.truth.points);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    set_threads(nullptr);

    const auto& truth = scene.truth;
    std::size_t interior = 0, hit = 0, far_nuclei = 0;
    double r_max = 0;
    for (double r : truth.radii) r_max = std::max(r_max, r);
    const auto dist = oracle::all_pairs_min(truth.points, label.height, label.width);
    Grid<std::uint8_t> nuclei(label.height, label.width, 0);
    for (std::size_t i = 0; i < label.size(); ++i) {
        const bool is_nuc = label.data[i] == PixelClass::nuclei;
        nuclei.data[i] = is_nuc;
        if (truth.instances.id.data[i] > 0) {
            ++interior;
            hit += is_nuc;
        }
        if (is_nuc && dist.data[i] > 2 * r_max) ++far_nuclei;
    }
    const auto comp = oracle::components(nuclei);
    int split = 0;
    for (auto [a, b] : truth.touching_pairs) {
        const auto pa = pixel_of(truth.points[static_cast<std::size_t>(a)], label.height, label.width);
        const auto pb = pixel_of(truth.points[static_cast<std::size_t>(b)], label.height, label.width);
        const int ca = comp(pa.row, pa.col), cb = comp(pb.row, pb.col);
        split += ca != 0 && cb != 0 && ca != cb;
    }
    const double coverage = static_cast<double>(hit) / static_cast<double>(interior);
    const double split_rate = truth.touching_pairs.empty() ? 1.0 : static_cast<double>(split) / truth.touching_pairs.size();
    out.check(coverage >= 0.90, "interior coverage >= 90%");
    out.check(far_nuclei == 0, "no nuclei beyond 2x max radius");
    out.check(split_rate >= 0.95, "touching pairs split >= 95%");
    out.check(secs < 30.0, "runtime < 30 s single-threaded");
    out.detail << "interior coverage " << coverage << ", far nuclei px " << far_nuclei << ", touching pairs split " << split
               << "/" << truth.touching_pairs.size() << ", generate+label " << secs << " s (1 thread)";
}

// 6. Entropy minimization lowers ignored-region entropy without hurting recall.
void entropy_effect(Outcome& out) {
    const auto& b = benchmark();
    const std::vector<TrainingSample> samples{{b.scene.image, b.label}};
    const RegionMask regions = regions_from_label(b.label);
    const FeatureMap features = featurize(b.scene.image);
    double entropy_of[2], recall_of[2];
    const double w_ent[2] = {0.0, 0.5};
    for (int i = 0; i < 2; ++i) {
        TrainConfig cfg;
        cfg.weights.entropy = w_ent[i];
        const TrainResult res = train(cfg, samples);
        const ProbMap probs = predict(res.classifier, features);
        entropy_of[i] = mean_entropy(probs, regions.ignored);
        const MatchReport rep = match_detections(detect_centers(probs), b.scene.truth.points, {11.0});
        recall_of[i] = prf1(rep).recall;
    }
    const double reduction = 1.0 - entropy_of[1] / entropy_of[0];
    out.check(entropy_of[1] < entropy_of[0], "strictly lower ignored entropy");
    out.check(reduction >= 0.20, "relative entropy reduction >= 20%");
    out.check(recall_of[1] >= recall_of[0] - 0.01, "recall not lower by more than 0.01");
    out.detail << "ignored entropy w0 " << entropy_of[0] << " -> w0.5 " << entropy_of[1] << " (reduction " << reduction * 100
               << "%), recall w0 " << recall_of[0] << " w0.5 " << recall_of[1];
}

// 7. Patch grid arithmetic and bit-exact extract/stitch roundtrip.
void patch_arithmetic(Outcome& out) {
    const PatchGrid grid = make_patch_grid(1000, 1000, 256, 0.10);
    out.check(grid.stride == 230, "stride 230");
    out.check(grid.anchors.size() == 25, "25 patches");
    std::mt19937_64 rng(7007);
    int exact = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int h = 256 + oracle::below(rng, 400), w = 256 + oracle::below(rng, 400), ch = 1 + 2 * oracle::below(rng, 2);
        Image2D img(h, w, ch);
        for (auto& v : img.data) v = static_cast<float>(oracle::unit(rng));
        const PatchSet set = extract_patches(img, 256, 0.10);
        exact += stitch(set.grid, set.patches, h, w) == img;
    }
    out.check(exact == 20, "roundtrip bit-exact");
    out.detail << "stride " << grid.stride << ", patches " << grid.anchors.size() << ", exact roundtrips " << exact << "/20";
}

// 8. HoVer maps vs direct centroid loop; analytic row case; symmetries.
void hover_targets(Outcome& out) {
    std::mt19937_64 rng(8008);
    double worst = 0;
    bool mirror = true, transpose = true;
    for (int trial = 0; trial < 20; ++trial) {
        const int H = 24 + oracle::below(rng, 16), W = 24 + oracle::below(rng, 16);
        Grid<std::int32_t> ids(H, W, 0);
        const int blobs = 1 + oracle::below(rng, 4);
        for (int b = 1; b <= blobs; ++b) {
            const double cx = oracle::unit(rng) * W, cy = oracle::unit(rng) * H;
            const double rx = 2 + oracle::unit(rng) * 6, ry = 2 + oracle::unit(rng) * 6;
            for (int r = 0; r < H; ++r)
                for (int c = 0; c < W; ++c) {
                    const double e = (c - cx) * (c - cx) / (rx * rx) + (r - cy) * (r - cy) / (ry * ry);
                    if (e <= 1.0 + 0.3 * oracle::unit(rng)) ids(r, c) = b;
                }
        }
        // Keep only 4-connected pieces as separate instances.
        Grid<std::uint8_t> fg(H, W, 0);
        Grid<std::int32_t> split(H, W, 0);
        int next = 0;
        for (int b = 1; b <= blobs; ++b) {
            for (std::size_t i = 0; i < fg.size(); ++i) fg.data[i] = ids.data[i] == b;
            int n = 0;
            const auto comp = oracle::components(fg, &n);
            for (std::size_t i = 0; i < fg.size(); ++i)
                if (comp.data[i]) split.data[i] = next + comp.data[i];
            next += n;
        }
        const InstanceMap inst = canonicalize(split);
        const HoVerTarget hv = hover_maps(inst);
        const auto [rh, rv] = oracle::centroid_offsets(inst.id);
        for (std::size_t i = 0; i < rh.size(); ++i)
            worst = std::max({worst, std::abs(hv.h.data[i] - rh.data[i]), std::abs(hv.v.data[i] - rv.data[i])});

        Grid<std::int32_t> flipped(H, W), transposed(W, H);
        for (int r = 0; r < H; ++r)
            for (int c = 0; c < W; ++c) {
                flipped(r, W - 1 - c) = inst.id(r, c);
                transposed(c, r) = inst.id(r, c);
            }
        const HoVerTarget fh = hover_maps(canonicalize(flipped));
        const HoVerTarget th = hover_maps(canonicalize(transposed));
        for (int r = 0; r < H; ++r)
            for (int c = 0; c < W; ++c) {
                mirror = mirror && std::abs(fh.h(r, W - 1 - c) + hv.h(r, c)) <= 1e-12 && std::abs(fh.v(r, W - 1 - c) - hv.v(r, c)) <= 1e-12;
                transpose = transpose && std::abs(th.h(c, r) - hv.v(r, c)) <= 1e-12 && std::abs(th.v(c, r) - hv.h(r, c)) <= 1e-12;
            }
    }
    Grid<std::int32_t> row(3, 5, 0);
    row(1, 1) = row(1, 2) = row(1, 3) = 1;
    const HoVerTarget rh = hover_maps(canonicalize(row));
    const bool row_exact = rh.h(1, 1) == -1.0 && rh.h(1, 2) == 0.0 && rh.h(1, 3) == 1.0 && rh.v(1, 1) == 0.0 &&
                           rh.v(1, 2) == 0.0 && rh.v(1, 3) == 0.0;
    out.check(worst <= 1e-6, "maps match direct loop within 1e-6");
    out.check(row_exact, "3-pixel row gives h = (-1, 0, 1)");
    out.check(mirror, "mirror negates h, keeps v");
    out.check(transpose, "transpose swaps h and v");
    out.detail << "max |map - ref| " << worst << ", row case " << (row_exact ? "exact" : "wrong") << ", mirror "
               << (mirror ? "ok" : "broken") << ", transpose " << (transpose ? "ok" : "broken");
}

// 9. Identical manifests across runs and thread counts.
void pipeline_determinism(Outcome& out) {
    const fs::path root = fs::temp_directory_path() / "weaklab_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const Scene scene = generate_scene(benchmark_scene_config());
    io::write_png(root / "image.png", scene.image);
    io::write_points_csv(root / "points.csv", scene.truth.points);

    std::vector<std::set<std::pair<std::string, std::string>>> runs;
    std::vector<std::string> labels;
    for (const char* threads : {"1", "1", "2", "4", static_cast<const char*>(nullptr)}) {
        set_threads(threads);
        PipelineConfig cfg;
        cfg.stack = root / "image.png";
        cfg.points = root / "points.csv";
        cfg.output_dir = root / ("out_" + std::to_string(runs.size()));
        const PipelineResult res = run_pipeline(cfg);
        std::set<std::pair<std::string, std::string>> digest;
        for (const auto& a : res.artifacts) digest.insert({a.path, a.sha256});
        runs.push_back(std::move(digest));
        labels.push_back(threads ? threads : "default");
    }
    set_threads(nullptr);
    bool same = true;
    for (const auto& r : runs) same = same && r == runs.front();
    out.check(same, "identical artifact checksums");
    out.check(!runs.front().empty(), "artifacts written");
    out.detail << runs.size() << " runs (threads";
    for (const auto& l : labels) out.detail << ' ' << l;
    out.detail << "), " << runs.front().size() << " artifacts each, checksum sets " << (same ? "identical" : "differ");
    fs::remove_all(root);
}

}  // namespace

int main() {
    set_warning_sink([](const std::string&) {});
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "metrics exactness", 10.0, metrics_exactness},
        {2, "geometry oracles", 5.0, geometry_oracles},
        {3, "loss gradient checks", 0.0, gradient_checks},
        {4, "composite-loss contract", 0.0, composite_contract},
        {5, "cluster label end-to-end", 0.0, cluster_label_end_to_end},
        {6, "entropy-minimization effect", 120.0, entropy_effect},
        {7, "patch arithmetic", 0.0, patch_arithmetic},
        {8, "HoVer targets", 0.0, hover_targets},
        {9, "pipeline determinism", 0.0, pipeline_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome out;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs >= c.budget_s) out.check(false, "runtime budget");
        failed += !out.pass;
        std::printf("criterion %d %-30s %s  (%.2f s) %s\n", c.id, c.name, out.pass ? "PASS" : "FAIL", secs, out.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
