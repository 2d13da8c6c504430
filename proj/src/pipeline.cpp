#include "weaklab/pipeline.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <set>

#include "weaklab/hover.hpp"
#include "weaklab/imaging.hpp"
#include "weaklab/io.hpp"
#include "weaklab/parallel.hpp"

namespace weaklab {

namespace fs = std::filesystem;
using nlohmann::json;

bool operator==(const PipelineConfig& a, const PipelineConfig& b) { return to_json(a) == to_json(b); }

json to_json(const PipelineConfig& c) {
    const auto& k = c.cluster;
    return json{
        {"input", {{"stack", c.stack.string()}, {"points", c.points.string()},
                   {"roi", c.roi ? json(c.roi->string()) : json(nullptr)}}},
        {"patch", {{"size", c.patch_size}, {"overlap", c.patch_overlap}}},
        {"cluster", {{"distance_cap", k.distance_cap},
                     {"k", k.kmeans.k},
                     {"seed", k.kmeans.seed},
                     {"max_iter", k.kmeans.max_iter},
                     {"tol", k.kmeans.tol},
                     {"dilation_radius", k.dilation_radius},
                     {"background_rule", to_string(k.background_rule)},
                     {"edge_width", k.edge_width}}},
        {"gaussian", {{"sigma", c.gaussian_sigma}}},
        {"loss", {{"ce", c.loss_weights.ce}, {"dice", c.loss_weights.dice}, {"mse", c.loss_weights.mse},
                  {"entropy", c.loss_weights.entropy}}},
        {"eval", {{"r_nuc", c.match.r_nuc}}},
        {"output", {{"dir", c.output_dir.string()}}},
    };
}

namespace {

// Reads a JSON object while tracking which keys were consumed, so anything
// left over can be reported as unknown.
class Section {
public:
    Section(const json& obj, std::string name) : obj_(obj), name_(std::move(name)) {
        if (!obj_.is_object()) throw ConfigError("config section '" + name_ + "' must be an object");
    }

    template <typename T>
    void read(const char* key, T& out) {
        used_.insert(key);
        if (!obj_.contains(key)) return;
        try {
            out = obj_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config key '" + name_ + "." + key + "' has the wrong type");
        }
    }

    std::optional<Section> child(const char* key) {
        used_.insert(key);
        if (!obj_.contains(key)) return std::nullopt;
        return Section(obj_.at(key), name_.empty() ? key : name_ + "." + key);
    }

    bool has_null(const char* key) {
        used_.insert(key);
        return obj_.contains(key) && obj_.at(key).is_null();
    }

    void finish() const {
        for (const auto& [key, _] : obj_.items())
            if (!used_.count(key)) throw ConfigError("unknown config key '" + (name_.empty() ? key : name_ + "." + key) + "'");
    }

private:
    const json& obj_;
    std::string name_;
    std::set<std::string> used_;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("config value out of range: " + what);
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& doc) {
    PipelineConfig c;
    Section root(doc, "");
    auto input = root.child("input");
    if (!input) throw ConfigError("config is missing the 'input' section");
    std::string stack, points, roi, rule = to_string(c.cluster.background_rule), out = c.output_dir.string();
    input->read("stack", stack);
    input->read("points", points);
    if (!input->has_null("roi")) {
        input->read("roi", roi);
        if (!roi.empty()) c.roi = roi;
    }
    input->finish();
    if (stack.empty() || points.empty()) throw ConfigError("config 'input' needs both 'stack' and 'points'");
    c.stack = stack;
    c.points = points;

    if (auto s = root.child("patch")) {
        s->read("size", c.patch_size);
        s->read("overlap", c.patch_overlap);
        s->finish();
    }
    if (auto s = root.child("cluster")) {
        s->read("distance_cap", c.cluster.distance_cap);
        s->read("k", c.cluster.kmeans.k);
        s->read("seed", c.cluster.kmeans.seed);
        s->read("max_iter", c.cluster.kmeans.max_iter);
        s->read("tol", c.cluster.kmeans.tol);
        s->read("dilation_radius", c.cluster.dilation_radius);
        s->read("background_rule", rule);
        s->read("edge_width", c.cluster.edge_width);
        s->finish();
    }
    try {
        c.cluster.background_rule = parse_background_rule(rule);
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    if (auto s = root.child("gaussian")) {
        s->read("sigma", c.gaussian_sigma);
        s->finish();
    }
    if (auto s = root.child("loss")) {
        s->read("ce", c.loss_weights.ce);
        s->read("dice", c.loss_weights.dice);
        s->read("mse", c.loss_weights.mse);
        s->read("entropy", c.loss_weights.entropy);
        s->finish();
    }
    if (auto s = root.child("eval")) {
        s->read("r_nuc", c.match.r_nuc);
        s->finish();
    }
    if (auto s = root.child("output")) {
        s->read("dir", out);
        s->finish();
    }
    c.output_dir = out;
    root.finish();

    require(c.patch_size >= 1, "patch.size >= 1");
    require(c.patch_overlap >= 0.0 && c.patch_overlap < 1.0, "0 <= patch.overlap < 1");
    require(c.cluster.distance_cap > 0.0, "cluster.distance_cap > 0");
    require(c.cluster.kmeans.k == 3, "cluster.k == 3 (nuclei, background, ignored)");
    require(c.cluster.kmeans.max_iter >= 1, "cluster.max_iter >= 1");
    require(c.cluster.kmeans.tol > 0.0, "cluster.tol > 0");
    require(c.cluster.dilation_radius >= 0.0, "cluster.dilation_radius >= 0");
    require(c.cluster.edge_width >= 1, "cluster.edge_width >= 1");
    require(c.gaussian_sigma > 0.0, "gaussian.sigma > 0");
    for (double w : {c.loss_weights.ce, c.loss_weights.dice, c.loss_weights.mse, c.loss_weights.entropy})
        require(w >= 0.0, "loss weights >= 0");
    require(c.match.r_nuc > 0.0, "eval.r_nuc > 0");
    return c;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        return pipeline_config_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

const std::vector<std::string>& patch_artifact_kinds() {
    static const std::vector<std::string> kinds{"patch_image", "points",     "cluster_label", "cluster_preview",
                                                "instances",   "hover_h",    "hover_v",       "gaussian_mask"};
    return kinds;
}

namespace {

struct PatchOutput {
    std::vector<std::pair<std::string, std::string>> files;  // (relative path, kind)
    std::string error;
};

template <typename F>
auto stage(const char* name, const std::string& where, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("stage '") + name + "' (" + where + "): " + e.what());
    }
}

PatchOutput process_patch(const PipelineConfig& cfg, const Image2D& patch, const PatchAnchor& anchor,
                          const PointSet& all_points, std::size_t index) {
    PatchOutput out;
    char dirname[64];
    std::snprintf(dirname, sizeof dirname, "patches/p%04zu_r%d_c%d", index, anchor.row, anchor.col);
    const fs::path rel(dirname);
    const fs::path dir = cfg.output_dir / rel;
    const std::string where = "patch " + std::to_string(index) + " of " + cfg.stack.string();
    fs::create_directories(dir);

    std::vector<Point> local;
    for (const auto& p : all_points)
        if (p.x >= anchor.col && p.x < anchor.col + patch.width && p.y >= anchor.row && p.y < anchor.row + patch.height)
            local.push_back({p.x - anchor.col, p.y - anchor.row});
    const PointSet points(std::move(local));

    auto emit = [&](const std::string& name, const std::string& kind) { out.files.emplace_back((rel / name).string(), kind); };

    io::write_png(dir / "image.png", patch);
    emit("image.png", "patch_image");
    io::write_points_csv(dir / "points.csv", points);
    emit("points.csv", "points");

    // Patches without annotations carry no nuclei: all background.
    const ClusterLabel label = points.empty()
                                   ? ClusterLabel(patch.height, patch.width, PixelClass::background)
                                   : stage("cluster-label", where, [&] { return make_cluster_label(patch, points, cfg.cluster); });
    io::write_cluster_label(dir / "cluster_label.png", label);
    emit("cluster_label.png", "cluster_label");
    io::write_cluster_preview(dir / "cluster_preview.png", label);
    emit("cluster_preview.png", "cluster_preview");

    const InstanceMap instances = stage("label-instances", where, [&] { return label_instances(label, points); });
    io::write_instances(dir / "instances.png", instances);
    emit("instances.png", "instances");

    const HoVerTarget hv = stage("hover-maps", where, [&] { return hover_maps(instances); });
    io::write_float_map(dir / "hover_h.f32", io::to_float_map(hv.h));
    emit("hover_h.f32", "hover_h");
    io::write_float_map(dir / "hover_v.f32", io::to_float_map(hv.v));
    emit("hover_v.f32", "hover_v");

    const Image2D mask = stage("gaussian-mask", where, [&] {
        return gaussian_mask(points, patch.height, patch.width, cfg.gaussian_sigma);
    });
    io::write_float_map(dir / "gaussian_mask.f32", io::to_float_map(mask));
    emit("gaussian_mask.f32", "gaussian_mask");
    return out;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    for (const auto& p : {config.stack, config.points})
        if (!fs::exists(p)) throw ConfigError("input path does not exist: " + p.string());
    if (config.roi && !fs::exists(*config.roi)) throw ConfigError("input path does not exist: " + config.roi->string());

    const std::string src = config.stack.string();
    const ImageStack stack = stage("load", src, [&] { return io::read_stack_or_image(config.stack); });
    const PointSet points = stage("load", config.points.string(), [&] { return io::read_points_csv(config.points); });
    Image2D image = stage("mip", src, [&] { return mip(stack); });
    if (config.roi) {
        const RoiPolygon roi = stage("roi", config.roi->string(), [&] { return io::read_roi_json(*config.roi); });
        image = stage("roi", config.roi->string(), [&] { return apply_roi(image, roi); });
    }
    stage("points", config.points.string(), [&] {
        points.require_within(image.height, image.width);
        return 0;
    });
    const PatchSet patches = stage("patch", src, [&] {
        return extract_patches(image, config.patch_size, config.patch_overlap);
    });

    fs::create_directories(config.output_dir);
    io::write_png(config.output_dir / "mip.png", image);
    io::write_float_map(config.output_dir / "mip.f32", io::to_float_map(image));

    const auto count = static_cast<std::ptrdiff_t>(patches.patches.size());
    std::vector<PatchOutput> outputs(patches.patches.size());
#pragma omp parallel for schedule(dynamic) num_threads(configured_threads())
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            outputs[idx] = process_patch(config, patches.patches[idx], patches.grid.anchors[idx], points, idx);
        } catch (const std::exception& e) {
            outputs[idx].error = e.what();
        }
    }
    for (const auto& o : outputs)
        if (!o.error.empty()) throw std::runtime_error(o.error);

    PipelineResult result;
    result.artifacts.push_back({"mip.png", "mip_preview", io::sha256_file(config.output_dir / "mip.png")});
    result.artifacts.push_back({"mip.f32", "mip", io::sha256_file(config.output_dir / "mip.f32")});
    for (const auto& o : outputs)
        for (const auto& [path, kind] : o.files) result.artifacts.push_back({path, kind, io::sha256_file(config.output_dir / path)});

    json artifacts = json::array();
    for (const auto& a : result.artifacts) artifacts.push_back({{"path", a.path}, {"kind", a.kind}, {"sha256", a.sha256}});
    json anchors = json::array();
    for (const auto& a : patches.grid.anchors) anchors.push_back({a.row, a.col});
    result.manifest = json{
        {"tool_version", kToolVersion},
        {"config", to_json(config)},
        {"image", {{"height", image.height}, {"width", image.width}, {"channels", image.channels}}},
        {"patch_grid", {{"patch_size", patches.grid.patch_size}, {"stride", patches.grid.stride}, {"anchors", anchors}}},
        {"artifacts", artifacts},
    };
    result.manifest_path = config.output_dir / "manifest.json";
    std::ofstream mf(result.manifest_path);
    if (!mf) throw IoError("cannot write " + result.manifest_path.string());
    mf << result.manifest.dump(2) << '\n';
    return result;
}

}  // namespace weaklab
