#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "weaklab/error.hpp"
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
using nlohmann::json;
using namespace weaklab;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
    return p.parent_path() / (p.stem().string() + suffix + p.extension().string());
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

Image2D to_image(const Grid<double>& g) {
    Image2D out(g.height, g.width, 1);
    for (std::size_t i = 0; i < g.size(); ++i) out.data[i] = static_cast<float>(std::clamp(g.data[i], 0.0, 1.0));
    return out;
}

Grid<double> to_grid(const io::FloatMap& m, const std::string& what) {
    if (m.channels != 1) throw InvalidInput(what + " must be a single-channel float map");
    Grid<double> g(m.height, m.width);
    std::copy(m.data.begin(), m.data.end(), g.data.begin());
    return g;
}

ProbMap to_probs(const io::FloatMap& m) {
    ProbMap p(m.height, m.width, m.channels);
    std::copy(m.data.begin(), m.data.end(), p.values.begin());
    return p;
}

json scores_json(const MatchReport& r) {
    const auto s = prf1(r);
    return {{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

json breakdown_json(const LossBreakdown& b) {
    return {{"ce", b.ce},
            {"dice", b.dice},
            {"mse", b.mse},
            {"entropy", b.entropy},
            {"total", b.total},
            {"weights", {{"ce", b.weights.ce}, {"dice", b.weights.dice}, {"mse", b.weights.mse}, {"entropy", b.weights.entropy}}}};
}

struct Dims {
    int height = 0;
    int width = 0;
};

void add_dims(CLI::App* cmd, Dims& d) {
    cmd->add_option("height", d.height, "Raster height in pixels")->required()->check(CLI::PositiveNumber);
    cmd->add_option("width", d.width, "Raster width in pixels")->required()->check(CLI::PositiveNumber);
}

void add_weights(CLI::App* cmd, LossWeights& w) {
    cmd->add_option("--w-ce", w.ce, "Cross-entropy weight")->capture_default_str()->check(CLI::NonNegativeNumber);
    cmd->add_option("--w-dice", w.dice, "Dice weight")->capture_default_str()->check(CLI::NonNegativeNumber);
    cmd->add_option("--w-mse", w.mse, "Regression weight")->capture_default_str()->check(CLI::NonNegativeNumber);
    cmd->add_option("--w-ent", w.entropy, "Entropy-minimization weight on ignored pixels")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak point-label toolkit for nuclei detection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    std::function<void()> action;

    // mip
    fs::path mip_in, mip_out, mip_raw;
    auto* mip_cmd = app.add_subcommand("mip", "Maximum intensity projection of a slice directory or single image");
    mip_cmd->add_option("stack", mip_in, "Directory of slices (lexicographic order) or one image")->required()->check(CLI::ExistingPath);
    mip_cmd->add_option("-o,--output", mip_out, "8-bit PNG output")->required();
    mip_cmd->add_option("--raw", mip_raw, "Optional float32 map output");
    mip_cmd->callback([&] {
        action = [&] {
            const Image2D img = mip(io::read_stack_or_image(mip_in));
            ensure_parent(mip_out);
            io::write_png(mip_out, img);
            if (!mip_raw.empty()) io::write_float_map(mip_raw, io::to_float_map(img));
        };
    });

    // roi
    fs::path roi_img, roi_poly, roi_out, roi_raw;
    auto* roi_cmd = app.add_subcommand("roi", "Zero pixels whose centers fall outside a polygon");
    roi_cmd->add_option("image", roi_img, "Input image")->required()->check(CLI::ExistingFile);
    roi_cmd->add_option("polygon", roi_poly, "JSON list of [x, y] vertices")->required()->check(CLI::ExistingFile);
    roi_cmd->add_option("-o,--output", roi_out, "8-bit PNG output")->required();
    roi_cmd->add_option("--raw", roi_raw, "Optional float32 map output");
    roi_cmd->callback([&] {
        action = [&] {
            const Image2D img = apply_roi(io::read_image(roi_img), io::read_roi_json(roi_poly));
            ensure_parent(roi_out);
            io::write_png(roi_out, img);
            if (!roi_raw.empty()) io::write_float_map(roi_raw, io::to_float_map(img));
        };
    });

    // patch
    fs::path patch_img, patch_dir;
    int patch_size = 256;
    double patch_overlap = 0.10;
    auto* patch_cmd = app.add_subcommand("patch", "Cut an image into overlapping square patches");
    patch_cmd->add_option("image", patch_img, "Input image")->required()->check(CLI::ExistingFile);
    patch_cmd->add_option("--size", patch_size, "Patch side in pixels")->capture_default_str()->check(CLI::PositiveNumber);
    patch_cmd->add_option("--overlap", patch_overlap, "Overlap fraction in [0, 1)")->capture_default_str()->check(CLI::Range(0.0, 0.999999));
    patch_cmd->add_option("-o,--output", patch_dir, "Output directory")->required();
    patch_cmd->callback([&] {
        action = [&] {
            const PatchSet set = extract_patches(io::read_image(patch_img), patch_size, patch_overlap);
            fs::create_directories(patch_dir);
            json anchors = json::array();
            for (std::size_t i = 0; i < set.patches.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof name, "patch_%04zu.png", i);
                io::write_png(patch_dir / name, set.patches[i]);
                anchors.push_back({{"file", name}, {"row", set.grid.anchors[i].row}, {"col", set.grid.anchors[i].col}});
            }
            const json grid{{"patch_size", set.grid.patch_size}, {"stride", set.grid.stride},
                            {"image_height", set.grid.image_height}, {"image_width", set.grid.image_width},
                            {"patches", anchors}};
            std::ofstream(patch_dir / "grid.json") << grid.dump(2) << '\n';
        };
    });

    // voronoi
    fs::path vor_points, vor_out, vor_preview, vor_edges;
    Dims vor_dims;
    int vor_edge_width = 2;
    auto* vor_cmd = app.add_subcommand("voronoi", "Rasterize the Voronoi label of a point set");
    vor_cmd->add_option("points", vor_points, "Points CSV (header x,y)")->required()->check(CLI::ExistingFile);
    add_dims(vor_cmd, vor_dims);
    vor_cmd->add_option("-o,--output", vor_out, "16-bit PNG of cell indices")->required();
    vor_cmd->add_option("--preview", vor_preview, "Color preview PNG (default: <output>_preview.png)");
    vor_cmd->add_option("--edges", vor_edges, "Optional edge mask PNG");
    vor_cmd->add_option("--edge-width", vor_edge_width, "Edge width for --edges")->capture_default_str()->check(CLI::PositiveNumber);
    vor_cmd->callback([&] {
        action = [&] {
            const VoronoiLabel label = rasterize_voronoi(io::read_points_csv(vor_points), vor_dims.height, vor_dims.width);
            ensure_parent(vor_out);
            io::write_voronoi(vor_out, label);
            io::write_voronoi_preview(vor_preview.empty() ? with_suffix(vor_out, "_preview") : vor_preview, label);
            if (!vor_edges.empty()) {
                Mask edges = voronoi_edges(label, vor_edge_width);
                for (auto& v : edges.data) v = v ? 255 : 0;
                io::write_png_gray8(vor_edges, edges);
            }
        };
    });

    // distmap
    fs::path dist_points, dist_out;
    Dims dist_dims;
    double dist_cap = 20.0;
    bool dist_no_clip = false;
    auto* dist_cmd = app.add_subcommand("distmap", "Euclidean distance to the nearest point, clipped at a cap");
    dist_cmd->add_option("points", dist_points, "Points CSV (header x,y)")->required()->check(CLI::ExistingFile);
    add_dims(dist_cmd, dist_dims);
    dist_cmd->add_option("--cap", dist_cap, "Clip distances above this value")->capture_default_str()->check(CLI::PositiveNumber);
    dist_cmd->add_flag("--no-clip", dist_no_clip, "Write unclipped distances");
    dist_cmd->add_option("-o,--output", dist_out, "Float32 map output (sidecar <output>.json)")->required();
    dist_cmd->callback([&] {
        action = [&] {
            DistanceMap d = distance_map(io::read_points_csv(dist_points), dist_dims.height, dist_dims.width);
            if (!dist_no_clip) d = clip_distance(d, dist_cap);
            ensure_parent(dist_out);
            io::write_float_map(dist_out, io::to_float_map(d));
        };
    });

    // cluster-label
    fs::path cl_img, cl_points, cl_out, cl_preview;
    ClusterLabelConfig cl_cfg;
    std::string cl_rule = to_string(cl_cfg.background_rule);
    auto* cl_cmd = app.add_subcommand("cluster-label", "Cluster label (nuclei/background/ignored) from an image and points");
    cl_cmd->add_option("image", cl_img, "Input image")->required()->check(CLI::ExistingFile);
    cl_cmd->add_option("points", cl_points, "Points CSV (header x,y)")->required()->check(CLI::ExistingFile);
    cl_cmd->add_option("--k", cl_cfg.kmeans.k, "Cluster count (three classes)")->capture_default_str()->check(CLI::Range(3, 3));
    cl_cmd->add_option("--seed", cl_cfg.kmeans.seed, "k-means++ seed")->capture_default_str();
    cl_cmd->add_option("--max-iter", cl_cfg.kmeans.max_iter, "Lloyd iteration limit")->capture_default_str()->check(CLI::PositiveNumber);
    cl_cmd->add_option("--tol", cl_cfg.kmeans.tol, "Centroid displacement tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    cl_cmd->add_option("--cap", cl_cfg.distance_cap, "Distance clip value")->capture_default_str()->check(CLI::PositiveNumber);
    cl_cmd->add_option("--dilation-radius", cl_cfg.dilation_radius, "Point dilation radius")->capture_default_str()->check(CLI::NonNegativeNumber);
    cl_cmd->add_option("--background-rule", cl_rule, "complement or literal")->capture_default_str()->check(CLI::IsMember({"complement", "literal"}));
    cl_cmd->add_option("--edge-width", cl_cfg.edge_width, "Voronoi edge width")->capture_default_str()->check(CLI::PositiveNumber);
    cl_cmd->add_option("-o,--output", cl_out, "Label PNG (0 background, 1 nuclei, 255 ignored)")->required();
    cl_cmd->add_option("--preview", cl_preview, "Color preview PNG (default: <output>_preview.png)");
    cl_cmd->callback([&] {
        action = [&] {
            cl_cfg.background_rule = parse_background_rule(cl_rule);
            const Image2D img = io::read_image(cl_img);
            const PointSet pts = io::read_points_csv(cl_points);
            pts.require_within(img.height, img.width);
            const ClusterLabel label = make_cluster_label(img, pts, cl_cfg);
            ensure_parent(cl_out);
            io::write_cluster_label(cl_out, label);
            io::write_cluster_preview(cl_preview.empty() ? with_suffix(cl_out, "_preview") : cl_preview, label);
        };
    });

    // hover-maps
    fs::path hv_label, hv_points, hv_dir;
    auto* hv_cmd = app.add_subcommand("hover-maps", "Instances and horizontal/vertical centroid-offset maps");
    hv_cmd->add_option("label", hv_label, "Cluster label PNG")->required()->check(CLI::ExistingFile);
    hv_cmd->add_option("points", hv_points, "Points CSV (header x,y)")->required()->check(CLI::ExistingFile);
    hv_cmd->add_option("-o,--output", hv_dir, "Output directory")->required();
    hv_cmd->callback([&] {
        action = [&] {
            const InstanceMap inst = label_instances(io::read_cluster_label(hv_label), io::read_points_csv(hv_points));
            const HoVerTarget hv = hover_maps(inst);
            fs::create_directories(hv_dir);
            io::write_instances(hv_dir / "instances.png", inst);
            io::write_float_map(hv_dir / "hover_h.f32", io::to_float_map(hv.h));
            io::write_float_map(hv_dir / "hover_v.f32", io::to_float_map(hv.v));
            io::write_signed_preview(hv_dir / "hover_h.png", hv.h);
            io::write_signed_preview(hv_dir / "hover_v.png", hv.v);
        };
    });

    // gaussian-mask
    fs::path gm_points, gm_out, gm_preview;
    Dims gm_dims;
    double gm_sigma = 5.0;
    auto* gm_cmd = app.add_subcommand("gaussian-mask", "Max-combined Gaussian bumps at each point");
    gm_cmd->add_option("points", gm_points, "Points CSV (header x,y)")->required()->check(CLI::ExistingFile);
    add_dims(gm_cmd, gm_dims);
    gm_cmd->add_option("--sigma", gm_sigma, "Gaussian sigma in pixels")->capture_default_str()->check(CLI::PositiveNumber);
    gm_cmd->add_option("-o,--output", gm_out, "Float32 map output")->required();
    gm_cmd->add_option("--preview", gm_preview, "Optional 8-bit PNG");
    gm_cmd->callback([&] {
        action = [&] {
            const Image2D mask = gaussian_mask(io::read_points_csv(gm_points), gm_dims.height, gm_dims.width, gm_sigma);
            ensure_parent(gm_out);
            io::write_float_map(gm_out, io::to_float_map(mask));
            if (!gm_preview.empty()) io::write_png(gm_preview, mask);
        };
    });

    // losses
    fs::path ls_probs, ls_label, ls_hp_h, ls_hp_v, ls_ht_h, ls_ht_v;
    LossWeights ls_weights;
    auto* ls_cmd = app.add_subcommand("losses", "Loss breakdown of a prediction against a cluster label, as JSON");
    ls_cmd->add_option("--probs", ls_probs, "Float32 class-probability map (channels = classes)")->required()->check(CLI::ExistingFile);
    ls_cmd->add_option("--label", ls_label, "Cluster label PNG")->required()->check(CLI::ExistingFile);
    auto* hp_h = ls_cmd->add_option("--hover-pred-h", ls_hp_h, "Predicted horizontal map")->check(CLI::ExistingFile);
    auto* hp_v = ls_cmd->add_option("--hover-pred-v", ls_hp_v, "Predicted vertical map")->check(CLI::ExistingFile);
    auto* ht_h = ls_cmd->add_option("--hover-target-h", ls_ht_h, "Target horizontal map")->check(CLI::ExistingFile);
    auto* ht_v = ls_cmd->add_option("--hover-target-v", ls_ht_v, "Target vertical map")->check(CLI::ExistingFile);
    hp_h->needs(hp_v, ht_h, ht_v);
    add_weights(ls_cmd, ls_weights);
    ls_cmd->callback([&] {
        action = [&] {
            const ProbMap probs = to_probs(io::read_float_map(ls_probs));
            const ClusterLabel label = io::read_cluster_label(ls_label);
            if (probs.height != label.height || probs.width != label.width)
                throw InvalidInput("prediction and label dimensions differ");
            LogitMap logits = probs;
            for (auto& v : logits.values) v = std::log(std::max(v, kProbClamp));
            CompositeTargets targets{targets_from_label(label), {}};
            HoVerTarget pred;
            const HoVerTarget* pred_ptr = nullptr;
            if (!ls_hp_h.empty()) {
                pred = {to_grid(io::read_float_map(ls_hp_h), "--hover-pred-h"), to_grid(io::read_float_map(ls_hp_v), "--hover-pred-v")};
                targets.hover = {to_grid(io::read_float_map(ls_ht_h), "--hover-target-h"),
                                 to_grid(io::read_float_map(ls_ht_v), "--hover-target-v")};
                pred_ptr = &pred;
            }
            const auto result = composite_loss(logits, pred_ptr, targets, regions_from_label(label), ls_weights);
            std::cout << std::setprecision(17) << breakdown_json(result.breakdown).dump(2) << '\n';
        };
    });

    // train-surrogate
    std::vector<fs::path> tr_images, tr_labels;
    fs::path tr_out, tr_trace;
    TrainConfig tr_cfg;
    auto* tr_cmd = app.add_subcommand("train-surrogate", "Train the linear pixel classifier by full-batch gradient descent");
    tr_cmd->add_option("--image", tr_images, "Training image (repeatable)")->required()->check(CLI::ExistingFile);
    tr_cmd->add_option("--label", tr_labels, "Cluster label PNG per image (repeatable)")->required()->check(CLI::ExistingFile);
    tr_cmd->add_option("--lr", tr_cfg.learning_rate, "Learning rate")->capture_default_str()->check(CLI::PositiveNumber);
    tr_cmd->add_option("--epochs", tr_cfg.epochs, "Gradient steps")->capture_default_str()->check(CLI::PositiveNumber);
    tr_cmd->add_option("--seed", tr_cfg.seed, "Weight initialization seed")->capture_default_str();
    tr_cmd->add_option("--w-ce", tr_cfg.weights.ce, "Cross-entropy weight")->capture_default_str()->check(CLI::NonNegativeNumber);
    tr_cmd->add_option("--w-dice", tr_cfg.weights.dice, "Dice weight")->capture_default_str()->check(CLI::NonNegativeNumber);
    tr_cmd->add_option("--w-ent", tr_cfg.weights.entropy, "Entropy-minimization weight")->capture_default_str()->check(CLI::NonNegativeNumber);
    tr_cmd->add_option("-o,--output", tr_out, "Classifier JSON")->required();
    tr_cmd->add_option("--trace", tr_trace, "Loss trace CSV (default: <output>_trace.csv)");
    tr_cmd->callback([&] {
        if (tr_images.size() != tr_labels.size()) throw CLI::ValidationError("--image and --label must be given the same number of times");
        action = [&] {
            std::vector<TrainingSample> samples;
            for (std::size_t i = 0; i < tr_images.size(); ++i)
                samples.push_back({io::read_image(tr_images[i]), io::read_cluster_label(tr_labels[i])});
            const TrainResult res = train(tr_cfg, samples);
            ensure_parent(tr_out);
            io::write_classifier(tr_out, res.classifier, tr_cfg.feature_set);
            fs::path trace = tr_trace.empty() ? tr_out.parent_path() / (tr_out.stem().string() + "_trace.csv") : tr_trace;
            io::write_trace_csv(trace, res.trace);
        };
    });

    // detect
    fs::path dt_classifier, dt_image, dt_probs, dt_out, dt_probs_out;
    double dt_threshold = 0.5;
    int dt_min_area = 9;
    auto* dt_cmd = app.add_subcommand("detect", "Nucleus centers from thresholded nuclei probability");
    auto* dt_c = dt_cmd->add_option("--classifier", dt_classifier, "Classifier JSON")->check(CLI::ExistingFile);
    auto* dt_i = dt_cmd->add_option("--image", dt_image, "Image to classify")->check(CLI::ExistingFile);
    auto* dt_p = dt_cmd->add_option("--probs", dt_probs, "Float32 probability map instead of a classifier")->check(CLI::ExistingFile);
    dt_c->needs(dt_i);
    dt_i->needs(dt_c);
    dt_p->excludes(dt_c);
    dt_cmd->add_option("--threshold", dt_threshold, "Nuclei probability threshold")->capture_default_str()->check(CLI::Range(1e-12, 1.0 - 1e-12));
    dt_cmd->add_option("--min-area", dt_min_area, "Minimum component area in pixels")->capture_default_str()->check(CLI::NonNegativeNumber);
    dt_cmd->add_option("-o,--output", dt_out, "Detections CSV")->required();
    dt_cmd->add_option("--probs-out", dt_probs_out, "Optional float32 probability map output");
    dt_cmd->callback([&] {
        if (dt_probs.empty() && dt_classifier.empty()) throw CLI::ValidationError("detect needs --probs or --classifier with --image");
        action = [&] {
            const ProbMap probs = dt_probs.empty() ? predict(io::read_classifier(dt_classifier), io::read_image(dt_image))
                                                   : to_probs(io::read_float_map(dt_probs));
            ensure_parent(dt_out);
            io::write_points_csv(dt_out, detect_centers(probs, dt_threshold, dt_min_area));
            if (!dt_probs_out.empty())
                io::write_float_map(dt_probs_out, {probs.height, probs.width, probs.classes,
                                                   std::vector<float>(probs.values.begin(), probs.values.end())});
        };
    });

    // eval
    fs::path ev_dets, ev_ann, ev_per_image;
    MatchConfig ev_cfg;
    auto* ev_cmd = app.add_subcommand("eval", "Precision, recall and F1 of detections against point annotations");
    ev_cmd->add_option("detections", ev_dets, "Detections CSV or directory of CSVs")->required()->check(CLI::ExistingPath);
    ev_cmd->add_option("annotations", ev_ann, "Annotations CSV or directory matched by filename")->required()->check(CLI::ExistingPath);
    ev_cmd->add_option("--r-nuc", ev_cfg.r_nuc, "Matching radius in pixels")->capture_default_str()->check(CLI::PositiveNumber);
    ev_cmd->add_option("--per-image", ev_per_image, "Optional per-image CSV");
    ev_cmd->callback([&] {
        action = [&] {
            std::vector<std::pair<std::string, MatchReport>> reports;
            if (fs::is_directory(ev_dets) != fs::is_directory(ev_ann))
                throw InvalidInput("detections and annotations must both be files or both be directories");
            if (fs::is_directory(ev_dets)) {
                std::vector<fs::path> files;
                for (const auto& e : fs::directory_iterator(ev_ann))
                    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path().filename());
                std::sort(files.begin(), files.end());
                if (files.empty()) throw InvalidInput("no annotation CSV files in " + ev_ann.string());
                for (const auto& f : files) {
                    // An image with no detection file has no detections.
                    const PointSet dets = fs::exists(ev_dets / f) ? io::read_points_csv(ev_dets / f) : PointSet{};
                    reports.emplace_back(f.string(), match_detections(dets, io::read_points_csv(ev_ann / f), ev_cfg));
                }
            } else {
                reports.emplace_back(ev_ann.filename().string(),
                                     match_detections(io::read_points_csv(ev_dets), io::read_points_csv(ev_ann), ev_cfg));
            }
            std::vector<MatchReport> all;
            for (const auto& [_, r] : reports) all.push_back(r);
            MatchReport total;
            for (const auto& r : all) {
                total.tp += r.tp;
                total.fp += r.fp;
                total.fn += r.fn;
            }
            const auto s = aggregate(all);
            const json out{{"tp", total.tp}, {"fp", total.fp}, {"fn", total.fn},
                           {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
            std::cout << out.dump(2) << '\n';
            if (!ev_per_image.empty()) {
                ensure_parent(ev_per_image);
                std::ofstream csv(ev_per_image);
                if (!csv) throw IoError("cannot write " + ev_per_image.string());
                csv << "image,tp,fp,fn,precision,recall,f1\n" << std::setprecision(17);
                for (const auto& [name, r] : reports) {
                    const auto p = prf1(r);
                    csv << name << ',' << r.tp << ',' << r.fp << ',' << r.fn << ',' << p.precision << ',' << p.recall << ',' << p.f1 << '\n';
                }
            }
        };
    });

    // synth
    fs::path sy_config, sy_dir;
    SceneConfig sy_cfg = benchmark_scene_config();
    auto* sy_cmd = app.add_subcommand("synth", "Generate a synthetic nuclei scene with ground truth");
    sy_cmd->add_option("--config", sy_config, "Scene JSON; explicit flags override it")->check(CLI::ExistingFile);
    auto* sy_h = sy_cmd->add_option("--height", sy_cfg.height, "Image height")->capture_default_str()->check(CLI::PositiveNumber);
    auto* sy_w = sy_cmd->add_option("--width", sy_cfg.width, "Image width")->capture_default_str()->check(CLI::PositiveNumber);
    auto* sy_n = sy_cmd->add_option("--count", sy_cfg.count, "Nucleus count")->capture_default_str()->check(CLI::NonNegativeNumber);
    auto* sy_s = sy_cmd->add_option("--seed", sy_cfg.seed, "Scene seed")->capture_default_str();
    auto* sy_t = sy_cmd->add_option("--touching-fraction", sy_cfg.touching_fraction, "Fraction of touching nuclei")
                     ->capture_default_str()
                     ->check(CLI::Range(0.0, 1.0));
    auto* sy_z = sy_cmd->add_option("--noise-sigma", sy_cfg.noise_sigma, "Background noise sigma")->capture_default_str()->check(CLI::NonNegativeNumber);
    sy_cmd->add_option("-o,--output", sy_dir, "Output directory")->required();
    sy_cmd->callback([&] {
        action = [&] {
            if (!sy_config.empty()) {
                SceneConfig base = io::read_scene_config(sy_config);
                if (sy_h->count()) base.height = sy_cfg.height;
                if (sy_w->count()) base.width = sy_cfg.width;
                if (sy_n->count()) base.count = sy_cfg.count;
                if (sy_s->count()) base.seed = sy_cfg.seed;
                if (sy_t->count()) base.touching_fraction = sy_cfg.touching_fraction;
                if (sy_z->count()) base.noise_sigma = sy_cfg.noise_sigma;
                sy_cfg = base;
            }
            const Scene scene = generate_scene(sy_cfg);
            fs::create_directories(sy_dir);
            io::write_png(sy_dir / "image.png", scene.image);
            io::write_float_map(sy_dir / "image.f32", io::to_float_map(scene.image));
            io::write_points_csv(sy_dir / "points.csv", scene.truth.points);
            io::write_instances(sy_dir / "instances.png", scene.truth.instances);
            io::write_scene_config(sy_dir / "scene.json", sy_cfg);
        };
    });

    // run
    fs::path run_config, run_out;
    auto* run_cmd = app.add_subcommand("run", "Full pipeline from a JSON config; writes artifacts and manifest.json");
    run_cmd->add_option("config", run_config, "Pipeline config JSON")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("-o,--output", run_out, "Override output.dir");
    run_cmd->callback([&] {
        action = [&] {
            PipelineConfig cfg = load_pipeline_config(run_config);
            if (!run_out.empty()) cfg.output_dir = run_out;
            const PipelineResult res = run_pipeline(cfg);
            std::cout << res.manifest_path.string() << '\n';
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }
    try {
        if (action) action();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
