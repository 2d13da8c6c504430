#include "weaklab/io.hpp"

#include <png.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace weaklab::io {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
    return f;
}

[[noreturn]] void png_fail(png_structp png, png_const_charp msg) {
    auto* where = static_cast<std::string*>(png_get_error_ptr(png));
    throw IoError("PNG error in " + *where + ": " + msg);
}

void png_warn(png_structp, png_const_charp) {}

RawImage read_png(const fs::path& path) {
    auto file = open_file(path, "rb");
    std::string where = path.string();
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &where, png_fail, png_warn);
    if (!png) throw IoError("cannot allocate PNG reader");
    png_infop info = png_create_info_struct(png);
    RawImage img;
    try {
        png_init_io(png, file.get());
        png_read_info(png, info);
        const int color = png_get_color_type(png, info);
        const int depth = png_get_bit_depth(png, info);
        if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
        if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
        if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
        png_read_update_info(png, info);

        img.width = static_cast<int>(png_get_image_width(png, info));
        img.height = static_cast<int>(png_get_image_height(png, info));
        img.channels = png_get_channels(png, info);
        img.bit_depth = png_get_bit_depth(png, info);
        const std::size_t rowbytes = png_get_rowbytes(png, info);
        std::vector<png_byte> buffer(rowbytes * static_cast<std::size_t>(img.height));
        std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
        for (int r = 0; r < img.height; ++r) rows[static_cast<std::size_t>(r)] = buffer.data() + rowbytes * static_cast<std::size_t>(r);
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);

        const std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) *
                              static_cast<std::size_t>(img.channels);
        img.samples.resize(n);
        if (img.bit_depth == 16) {
            for (std::size_t i = 0; i < n; ++i)
                img.samples[i] = static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1]);
        } else {
            for (int r = 0; r < img.height; ++r)
                for (std::size_t j = 0; j < static_cast<std::size_t>(img.width * img.channels); ++j)
                    img.samples[static_cast<std::size_t>(r) * static_cast<std::size_t>(img.width * img.channels) + j] =
                        rows[static_cast<std::size_t>(r)][j];
        }
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

RawImage read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P5") throw IoError(path.string() + ": only binary PGM (P5) is supported");
    auto next_int = [&]() {
        int v = 0;
        while (in >> std::ws && in.peek() == '#') in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
        if (!(in >> v)) throw IoError(path.string() + ": malformed PGM header");
        return v;
    };
    RawImage img;
    img.width = next_int();
    img.height = next_int();
    const int maxval = next_int();
    in.get();
    if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 65535)
        throw IoError(path.string() + ": unsupported PGM dimensions or maxval");
    img.bit_depth = maxval > 255 ? 16 : 8;
    const std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    img.samples.resize(n);
    if (img.bit_depth == 8) {
        std::vector<unsigned char> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        std::copy(buf.begin(), buf.end(), img.samples.begin());
    } else {
        std::vector<unsigned char> buf(2 * n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(2 * n));
        for (std::size_t i = 0; i < n; ++i) img.samples[i] = static_cast<std::uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
    }
    if (!in) throw IoError(path.string() + ": truncated PGM data");
    return img;
}

std::string lower_ext(const fs::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e;
}

void write_png_bytes(const fs::path& path, int width, int height, int color_type, int bit_depth,
                     const std::vector<png_byte>& bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    auto file = open_file(path, "wb");
    std::string where = path.string();
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &where, png_fail, png_warn);
    if (!png) throw IoError("cannot allocate PNG writer");
    png_infop info = png_create_info_struct(png);
    try {
        png_init_io(png, file.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth, color_type,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        const std::size_t rowbytes = png_get_rowbytes(png, info);
        for (int r = 0; r < height; ++r)
            png_write_row(png, const_cast<png_bytep>(bytes.data() + rowbytes * static_cast<std::size_t>(r)));
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

}  // namespace

RawImage read_raw(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("no such file: " + path.string());
    const auto ext = lower_ext(path);
    if (ext == ".png") return read_png(path);
    if (ext == ".pgm") return read_pgm(path);
    throw IoError(path.string() + ": unsupported image format (expected .png or .pgm)");
}

Image2D read_image(const fs::path& path) {
    const RawImage raw = read_raw(path);
    Image2D img(raw.height, raw.width, raw.channels);
    const double scale = raw.bit_depth == 16 ? 65535.0 : 255.0;
    for (std::size_t i = 0; i < raw.samples.size(); ++i) img.data[i] = static_cast<float>(raw.samples[i] / scale);
    return img;
}

ImageStack read_stack(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = lower_ext(entry.path());
        if (entry.is_regular_file() && (ext == ".png" || ext == ".pgm")) files.push_back(entry.path());
    }
    if (files.empty()) throw IoError("no PNG/PGM slices in " + dir.string());
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
        return a.filename().string() < b.filename().string();
    });
    std::vector<Image2D> slices;
    slices.reserve(files.size());
    for (const auto& f : files) slices.push_back(read_image(f));
    return ImageStack::from_slices(slices);
}

ImageStack read_stack_or_image(const fs::path& path) {
    if (fs::is_directory(path)) return read_stack(path);
    const Image2D img = read_image(path);
    return ImageStack::from_slices(std::span<const Image2D>(&img, 1));
}

void write_png(const fs::path& path, const Image2D& image) {
    if (image.channels != 1 && image.channels != 3) throw InvalidInput("PNG export supports 1 or 3 channels");
    std::vector<png_byte> bytes(image.data.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = to_byte(image.data[i]);
    write_png_bytes(path, image.width, image.height, image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, 8,
                    bytes);
}

void write_png_gray8(const fs::path& path, const Grid<std::uint8_t>& gray) {
    write_png_bytes(path, gray.width, gray.height, PNG_COLOR_TYPE_GRAY, 8, gray.data);
}

void write_png_gray16(const fs::path& path, const Grid<std::uint16_t>& gray) {
    std::vector<png_byte> bytes(gray.size() * 2);
    for (std::size_t i = 0; i < gray.size(); ++i) {
        bytes[2 * i] = static_cast<png_byte>(gray.data[i] >> 8);
        bytes[2 * i + 1] = static_cast<png_byte>(gray.data[i] & 0xff);
    }
    write_png_bytes(path, gray.width, gray.height, PNG_COLOR_TYPE_GRAY, 16, bytes);
}

void write_png_rgb(const fs::path& path, const Grid<std::array<std::uint8_t, 3>>& rgb) {
    std::vector<png_byte> bytes(rgb.size() * 3);
    for (std::size_t i = 0; i < rgb.size(); ++i)
        for (int c = 0; c < 3; ++c) bytes[3 * i + static_cast<std::size_t>(c)] = rgb.data[i][static_cast<std::size_t>(c)];
    write_png_bytes(path, rgb.width, rgb.height, PNG_COLOR_TYPE_RGB, 8, bytes);
}

fs::path sidecar_path(const fs::path& raw_path) { return fs::path(raw_path.string() + ".json"); }

void write_float_map(const fs::path& path, const FloatMap& map) {
    const std::size_t n = static_cast<std::size_t>(map.height) * static_cast<std::size_t>(map.width) *
                          static_cast<std::size_t>(map.channels);
    if (map.data.size() != n) throw InvalidInput("float map size does not match its dimensions");
    std::string bytes(n * 4, '\0');
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t bits;
        std::memcpy(&bits, &map.data[i], 4);
        for (int b = 0; b < 4; ++b) bytes[4 * i + static_cast<std::size_t>(b)] = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
    write_text(path, bytes);
    const nlohmann::json meta{{"width", map.width}, {"height", map.height}, {"channels", map.channels}};
    write_text(sidecar_path(path), meta.dump() + "\n");
}

FloatMap read_float_map(const fs::path& path) {
    std::ifstream meta_in(sidecar_path(path));
    if (!meta_in) throw IoError("missing sidecar descriptor " + sidecar_path(path).string());
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(meta_in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(sidecar_path(path).string() + ": " + e.what());
    }
    FloatMap map;
    map.width = meta.at("width").get<int>();
    map.height = meta.at("height").get<int>();
    map.channels = meta.value("channels", 1);
    const std::size_t n = static_cast<std::size_t>(map.height) * static_cast<std::size_t>(map.width) *
                          static_cast<std::size_t>(map.channels);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes(n * 4);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size()) throw IoError(path.string() + ": shorter than its descriptor");
    map.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[4 * i + static_cast<std::size_t>(b)]) << (8 * b);
        std::memcpy(&map.data[i], &bits, 4);
    }
    return map;
}

FloatMap to_float_map(const Grid<double>& grid) {
    FloatMap m{grid.height, grid.width, 1, std::vector<float>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) m.data[i] = static_cast<float>(grid.data[i]);
    return m;
}

FloatMap to_float_map(const Image2D& image) { return {image.height, image.width, image.channels, image.data}; }

PointSet read_points_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open points file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + ": empty points file");
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }), line.end());
    if (line != "x,y") throw IoError(path.string() + ": expected header 'x,y'");
    std::vector<Point> pts;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        Point p;
        char comma = 0;
        if (!(ss >> p.x >> comma >> p.y) || comma != ',')
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 'x,y'");
        pts.push_back(p);
    }
    return PointSet(std::move(pts));
}

void write_points_csv(const fs::path& path, const PointSet& points) {
    std::ostringstream out;
    out << "x,y\n" << std::setprecision(17);
    for (const auto& p : points) out << p.x << ',' << p.y << '\n';
    write_text(path, out.str());
}

RoiPolygon read_roi_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ROI file " + path.string());
    RoiPolygon roi;
    try {
        const auto doc = nlohmann::json::parse(in);
        if (!doc.is_array()) throw IoError(path.string() + ": ROI must be a JSON array of [x, y] pairs");
        for (const auto& v : doc) {
            if (!v.is_array() || v.size() != 2) throw IoError(path.string() + ": ROI vertex must be [x, y]");
            roi.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return roi;
}

ClusterLabel read_cluster_label(const fs::path& path) {
    const RawImage raw = read_raw(path);
    if (raw.channels != 1 || raw.bit_depth != 8) throw IoError(path.string() + ": cluster label must be 8-bit grayscale");
    ClusterLabel label(raw.height, raw.width);
    for (std::size_t i = 0; i < label.size(); ++i) {
        const auto v = raw.samples[i];
        if (v != 0 && v != 1 && v != 255) throw IoError(path.string() + ": label value " + std::to_string(v) + " is not 0, 1 or 255");
        label.data[i] = static_cast<PixelClass>(v);
    }
    return label;
}

void write_cluster_label(const fs::path& path, const ClusterLabel& label) {
    Grid<std::uint8_t> gray(label.height, label.width);
    for (std::size_t i = 0; i < label.size(); ++i) gray.data[i] = static_cast<std::uint8_t>(label.data[i]);
    write_png_gray8(path, gray);
}

void write_cluster_preview(const fs::path& path, const ClusterLabel& label) {
    Grid<std::array<std::uint8_t, 3>> rgb(label.height, label.width, {0, 0, 0});
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (label.data[i] == PixelClass::nuclei) rgb.data[i] = {0, 255, 0};
        else if (label.data[i] == PixelClass::background) rgb.data[i] = {255, 0, 0};
    }
    write_png_rgb(path, rgb);
}

void write_voronoi(const fs::path& path, const VoronoiLabel& label) {
    Grid<std::uint16_t> gray(label.height, label.width);
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (label.data[i] < 0 || label.data[i] > 65535) throw InvalidInput("Voronoi index does not fit in 16 bits");
        gray.data[i] = static_cast<std::uint16_t>(label.data[i]);
    }
    write_png_gray16(path, gray);
}

void write_voronoi_preview(const fs::path& path, const VoronoiLabel& label) {
    Grid<std::array<std::uint8_t, 3>> rgb(label.height, label.width);
    for (std::size_t i = 0; i < label.size(); ++i) {
        const double hue = std::fmod(label.data[i] * 0.618033988749895, 1.0) * 6.0;
        const double f = hue - std::floor(hue);
        const std::array<double, 6> r{1, 1 - f, 0, 0, f, 1}, g{f, 1, 1, 1 - f, 0, 0}, b{0, 0, f, 1, 1, 1 - f};
        const auto s = static_cast<std::size_t>(hue) % 6;
        rgb.data[i] = {to_byte(0.25 + 0.75 * r[s]), to_byte(0.25 + 0.75 * g[s]), to_byte(0.25 + 0.75 * b[s])};
    }
    write_png_rgb(path, rgb);
}

void write_instances(const fs::path& path, const InstanceMap& instances) {
    Grid<std::uint16_t> gray(instances.id.height, instances.id.width);
    if (instances.count > 65535) throw InvalidInput("too many instances for a 16-bit PNG");
    for (std::size_t i = 0; i < gray.size(); ++i) gray.data[i] = static_cast<std::uint16_t>(instances.id.data[i]);
    write_png_gray16(path, gray);
}

InstanceMap read_instances(const fs::path& path) {
    const RawImage raw = read_raw(path);
    if (raw.channels != 1) throw IoError(path.string() + ": instance map must be grayscale");
    Grid<std::int32_t> ids(raw.height, raw.width);
    for (std::size_t i = 0; i < ids.size(); ++i) ids.data[i] = raw.samples[i];
    InstanceMap out{std::move(ids), 0};
    for (auto v : out.id.data) out.count = std::max(out.count, static_cast<int>(v));
    return out;
}

void write_signed_preview(const fs::path& path, const Grid<double>& values) {
    Grid<std::array<std::uint8_t, 3>> rgb(values.height, values.width, {0, 0, 0});
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = std::clamp(values.data[i], -1.0, 1.0);
        rgb.data[i] = v >= 0 ? std::array<std::uint8_t, 3>{to_byte(v), 0, 0} : std::array<std::uint8_t, 3>{0, 0, to_byte(-v)};
    }
    write_png_rgb(path, rgb);
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 computation failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return hex.str();
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(bytes);
}

}  // namespace weaklab::io

namespace weaklab::io {

void write_classifier(const fs::path& path, const PixelClassifier& c, const std::string& feature_set) {
    const nlohmann::json doc{{"feature_set", feature_set}, {"feature_dim", c.feature_dim}, {"classes", c.classes},
                             {"weights", c.weights},        {"bias", c.bias},               {"feature_shift", c.feature_shift},
                             {"feature_scale", c.feature_scale}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17) << doc.dump(2) << '\n';
}

PixelClassifier read_classifier(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open classifier file " + path.string());
    PixelClassifier c;
    try {
        const auto doc = nlohmann::json::parse(in);
        if (doc.contains("feature_set") && doc.at("feature_set").get<std::string>() != kFeatureSet)
            throw IoError(path.string() + ": unsupported feature set " + doc.at("feature_set").get<std::string>());
        c.feature_dim = doc.at("feature_dim").get<int>();
        c.classes = doc.at("classes").get<int>();
        c.weights = doc.at("weights").get<std::vector<double>>();
        c.bias = doc.at("bias").get<std::vector<double>>();
        c.feature_shift = doc.value("feature_shift", std::vector<double>(static_cast<std::size_t>(c.feature_dim), 0.0));
        c.feature_scale = doc.value("feature_scale", std::vector<double>(static_cast<std::size_t>(c.feature_dim), 1.0));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    const auto dim = static_cast<std::size_t>(c.feature_dim);
    if (c.feature_dim <= 0 || c.classes <= 0 || c.weights.size() != dim * static_cast<std::size_t>(c.classes) ||
        c.bias.size() != static_cast<std::size_t>(c.classes) || c.feature_shift.size() != dim || c.feature_scale.size() != dim)
        throw IoError(path.string() + ": classifier dimensions are inconsistent");
    return c;
}

void write_trace_csv(const fs::path& path, const std::vector<LossBreakdown>& trace) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "epoch,ce,dice,mse,entropy,total\n" << std::setprecision(17);
    for (std::size_t e = 0; e < trace.size(); ++e) {
        const auto& t = trace[e];
        out << e << ',' << t.ce << ',' << t.dice << ',' << t.mse << ',' << t.entropy << ',' << t.total << '\n';
    }
}

namespace {

nlohmann::json scene_json(const SceneConfig& c) {
    return {{"height", c.height},
            {"width", c.width},
            {"count", c.count},
            {"radius_min", c.radius_min},
            {"radius_max", c.radius_max},
            {"min_separation", c.min_separation},
            {"touching_fraction", c.touching_fraction},
            {"core_level", c.core_level},
            {"edge_sigma", c.edge_sigma},
            {"background_level", c.background_level},
            {"noise_sigma", c.noise_sigma},
            {"seed", c.seed}};
}

}  // namespace

SceneConfig read_scene_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene file " + path.string());
    SceneConfig c;
    try {
        const auto doc = nlohmann::json::parse(in);
        const auto known = scene_json(c);
        for (const auto& [key, _] : doc.items())
            if (!known.contains(key)) throw IoError(path.string() + ": unknown scene key '" + key + "'");
        auto get = [&](const char* key, auto& field) {
            if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("height", c.height);
        get("width", c.width);
        get("count", c.count);
        get("radius_min", c.radius_min);
        get("radius_max", c.radius_max);
        get("min_separation", c.min_separation);
        get("touching_fraction", c.touching_fraction);
        get("core_level", c.core_level);
        get("edge_sigma", c.edge_sigma);
        get("background_level", c.background_level);
        get("noise_sigma", c.noise_sigma);
        get("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return c;
}

void write_scene_config(const fs::path& path, const SceneConfig& config) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << scene_json(config).dump(2) << '\n';
}

}  // namespace weaklab::io
