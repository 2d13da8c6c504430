#include <doctest.h>

#include <fstream>
#include <string>

#include <json.hpp>
#include "oracles.hpp"
#include "weaklab/io.hpp"

using namespace weaklab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("weaklab_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("8-bit PNG round trip") {
    TempDir dir;
    Image2D img(5, 7, 1);
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<float>(i * 7 % 256) / 255.0f;
    io::write_png(dir / "a.png", img);
    const Image2D back = io::read_image(dir / "a.png");
    REQUIRE(back.height == 5);
    REQUIRE(back.width == 7);
    for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(back.data[i] == doctest::Approx(img.data[i]).epsilon(1e-6));

    Image2D rgb(3, 4, 3, 0.5f);
    rgb.at(1, 2, 0) = 1.0f;
    io::write_png(dir / "rgb.png", rgb);
    const Image2D rgb_back = io::read_image(dir / "rgb.png");
    CHECK(rgb_back.channels == 3);
    CHECK(rgb_back.at(1, 2, 0) == 1.0f);
    CHECK(rgb_back.at(0, 0, 1) == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("16-bit PNG scales by 65535") {
    TempDir dir;
    Grid<std::uint16_t> g(2, 2);
    g.data = {0, 1000, 65535, 32768};
    io::write_png_gray16(dir / "g.png", g);
    const io::RawImage raw = io::read_raw(dir / "g.png");
    CHECK(raw.bit_depth == 16);
    CHECK(raw.samples == std::vector<std::uint16_t>{0, 1000, 65535, 32768});
    const Image2D img = io::read_image(dir / "g.png");
    CHECK(img.data[1] == doctest::Approx(1000.0 / 65535.0));
    CHECK(img.data[2] == 1.0f);
}

TEST_CASE("binary PGM") {
    TempDir dir;
    {
        std::ofstream out(dir / "a.pgm", std::ios::binary);
        out << "P5\n# comment\n3 2\n255\n";
        const unsigned char px[6] = {0, 51, 102, 153, 204, 255};
        out.write(reinterpret_cast<const char*>(px), 6);
    }
    const Image2D img = io::read_image(dir / "a.pgm");
    CHECK(img.height == 2);
    CHECK(img.width == 3);
    CHECK(img.at(0, 1) == doctest::Approx(0.2));
    CHECK(img.at(1, 2) == 1.0f);

    write_text(dir / "b.pgm", "P2\n1 1\n255\n0\n");
    CHECK_THROWS_AS(io::read_image(dir / "b.pgm"), IoError);
    CHECK_THROWS_AS(io::read_image(dir / "missing.png"), IoError);
    write_text(dir / "c.tif", "x");
    CHECK_THROWS_AS(io::read_image(dir / "c.tif"), IoError);
}

TEST_CASE("stack directory is read in lexicographic order") {
    TempDir dir;
    fs::create_directories(dir / "stack");
    io::write_png(dir / "stack/z10.png", Image2D(4, 4, 1, 0.2f));
    io::write_png(dir / "stack/z02.png", Image2D(4, 4, 1, 0.8f));
    const ImageStack s = io::read_stack(dir / "stack");
    REQUIRE(s.depth == 2);
    CHECK(s.at(0, 0, 0) == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(s.at(1, 0, 0) == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(io::read_stack_or_image(dir / "stack/z10.png").depth == 1);

    io::write_png(dir / "stack/z11.png", Image2D(5, 4, 1));
    CHECK_THROWS(io::read_stack(dir / "stack"));
}

TEST_CASE("float map and sidecar") {
    TempDir dir;
    io::FloatMap m{2, 3, 1, {0.5f, -1.0f, 2.25f, 0.0f, 1e-7f, 3.0f}};
    io::write_float_map(dir / "m.f32", m);
    CHECK(fs::exists(io::sidecar_path(dir / "m.f32")));
    CHECK(fs::file_size(dir / "m.f32") == 24);
    const io::FloatMap back = io::read_float_map(dir / "m.f32");
    CHECK(back.height == 2);
    CHECK(back.width == 3);
    CHECK(back.data == m.data);

    std::ifstream meta(io::sidecar_path(dir / "m.f32"));
    const auto doc = nlohmann::json::parse(meta);
    CHECK(doc.at("width") == 3);
    CHECK(doc.at("height") == 2);
    CHECK(doc.at("channels") == 1);

    fs::remove(io::sidecar_path(dir / "m.f32"));
    CHECK_THROWS_AS(io::read_float_map(dir / "m.f32"), IoError);
}

TEST_CASE("points CSV") {
    TempDir dir;
    const PointSet pts({{1.5, 2.25}, {0.1, 99.75}});
    io::write_points_csv(dir / "p.csv", pts);
    CHECK(io::read_points_csv(dir / "p.csv") == pts);

    write_text(dir / "bad_header.csv", "col,row\n1,2\n");
    CHECK_THROWS_AS(io::read_points_csv(dir / "bad_header.csv"), IoError);
    write_text(dir / "bad_row.csv", "x,y\n1,2\nthree,4\n");
    CHECK_THROWS_AS(io::read_points_csv(dir / "bad_row.csv"), IoError);
    write_text(dir / "dup.csv", "x,y\n1,2\n1,2\n");
    CHECK_THROWS_AS(io::read_points_csv(dir / "dup.csv"), InvalidInput);
    write_text(dir / "empty.csv", "x,y\n");
    CHECK(io::read_points_csv(dir / "empty.csv").empty());
}

TEST_CASE("ROI JSON") {
    TempDir dir;
    write_text(dir / "roi.json", "[[0,0],[10,0],[10,5]]");
    const RoiPolygon roi = io::read_roi_json(dir / "roi.json");
    REQUIRE(roi.vertices.size() == 3);
    CHECK(roi.vertices[2] == Point{10, 5});
    write_text(dir / "bad.json", "{\"a\": 1}");
    CHECK_THROWS_AS(io::read_roi_json(dir / "bad.json"), IoError);
    write_text(dir / "short.json", "[[0,0,1]]");
    CHECK_THROWS_AS(io::read_roi_json(dir / "short.json"), IoError);
}

TEST_CASE("cluster label codes") {
    TempDir dir;
    ClusterLabel l(2, 3, PixelClass::background);
    l(0, 1) = PixelClass::nuclei;
    l(1, 2) = PixelClass::ignored;
    io::write_cluster_label(dir / "l.png", l);
    const io::RawImage raw = io::read_raw(dir / "l.png");
    CHECK(raw.samples == std::vector<std::uint16_t>{0, 1, 0, 0, 0, 255});
    CHECK(io::read_cluster_label(dir / "l.png") == l);

    Grid<std::uint8_t> bad(1, 2);
    bad.data = {0, 7};
    io::write_png_gray8(dir / "bad.png", bad);
    CHECK_THROWS_AS(io::read_cluster_label(dir / "bad.png"), IoError);

    io::write_cluster_preview(dir / "prev.png", l);
    const Image2D prev = io::read_image(dir / "prev.png");
    CHECK(prev.channels == 3);
    CHECK(prev.at(0, 1, 1) == 1.0f);
    CHECK(prev.at(0, 0, 0) == 1.0f);
    CHECK(prev.at(1, 2, 0) == 0.0f);
}

TEST_CASE("instance map round trip") {
    TempDir dir;
    Grid<std::int32_t> ids(3, 3, 0);
    ids(0, 0) = 1;
    ids(2, 2) = 300;
    const InstanceMap m{ids, 300};
    io::write_instances(dir / "i.png", m);
    const InstanceMap back = io::read_instances(dir / "i.png");
    CHECK(back.id == ids);
}

TEST_CASE("sha256") {
    const std::string abc = "abc";
    const std::vector<std::uint8_t> bytes(abc.begin(), abc.end());
    CHECK(io::sha256_hex(bytes) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(io::sha256_hex({}) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    TempDir dir;
    write_text(dir / "abc.txt", "abc");
    CHECK(io::sha256_file(dir / "abc.txt") == io::sha256_hex(bytes));
}

TEST_CASE("classifier and scene files") {
    TempDir dir;
    PixelClassifier pc = PixelClassifier::zeros(4, 2);
    pc.weights = {0.1, -0.2, 0.3, -0.4, 0.5, -0.6, 0.7, -0.8};
    pc.bias = {0.25, -0.25};
    pc.feature_shift = {1, 2, 3, 4};
    pc.feature_scale = {0.5, 0.5, 2, 2};
    io::write_classifier(dir / "c.json", pc, kFeatureSet);
    const PixelClassifier back = io::read_classifier(dir / "c.json");
    CHECK(back.weights == pc.weights);
    CHECK(back.bias == pc.bias);
    CHECK(back.feature_shift == pc.feature_shift);
    CHECK(back.feature_scale == pc.feature_scale);

    SceneConfig cfg;
    cfg.count = 12;
    cfg.noise_sigma = 0.125;
    io::write_scene_config(dir / "s.json", cfg);
    const SceneConfig sc = io::read_scene_config(dir / "s.json");
    CHECK(sc.count == 12);
    CHECK(sc.noise_sigma == 0.125);
    CHECK(sc.seed == cfg.seed);
    write_text(dir / "partial.json", "{\"count\": 3}");
    CHECK(io::read_scene_config(dir / "partial.json").width == 512);
    write_text(dir / "unknown.json", "{\"nuclei\": 3}");
    CHECK_THROWS_AS(io::read_scene_config(dir / "unknown.json"), IoError);

    io::write_trace_csv(dir / "t.csv", {LossBreakdown{}, LossBreakdown{}});
    std::ifstream in(dir / "t.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "epoch,ce,dice,mse,entropy,total");
}
