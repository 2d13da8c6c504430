#include <benchmark/benchmark.h>

#include <cstdlib>
#include <random>
#include <string>

#include "weaklab/imaging.hpp"
#include "weaklab/serial.hpp"
#include "weaklab/surrogate.hpp"
#include "weaklab/synth.hpp"
#include "weaklab/weak_labels.hpp"

using namespace weaklab;

namespace {

const Scene& scene() {
    static const Scene s = generate_scene(benchmark_scene_config());
    return s;
}

ImageStack stack(int depth) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    ImageStack s(depth, 512, 512, 3);
    for (auto& v : s.data) v = u(rng);
    return s;
}

FeatureMap features() {
    const auto& s = scene();
    const auto d = clip_distance(distance_map(s.truth.points, s.image.height, s.image.width), 20.0);
    return build_feature_map(s.image, d, 20.0);
}

std::vector<double> centroids(int dim) {
    std::vector<double> c(static_cast<std::size_t>(3 * dim));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<double>(i % 7) * 3.0;
    return c;
}

Grid<double> plane() {
    const auto& img = scene().image;
    Grid<double> g(img.height, img.width);
    for (std::size_t i = 0; i < g.size(); ++i) g.data[i] = img.data[i];
    return g;
}

void set_threads(const benchmark::State& state) {
    setenv("WEAKLAB_THREADS", std::to_string(state.range(0)).c_str(), 1);
}

void BM_mip_serial(benchmark::State& state) {
    const auto s = stack(8);
    for (auto _ : state) benchmark::DoNotOptimize(serial::mip(s));
}

void BM_mip_omp(benchmark::State& state) {
    set_threads(state);
    const auto s = stack(8);
    for (auto _ : state) benchmark::DoNotOptimize(mip(s));
}

void BM_nearest_site_serial(benchmark::State& state) {
    const auto& s = scene();
    for (auto _ : state) benchmark::DoNotOptimize(serial::nearest_site_transform(s.truth.points, 512, 512));
}

void BM_nearest_site_omp(benchmark::State& state) {
    set_threads(state);
    const auto& s = scene();
    for (auto _ : state) benchmark::DoNotOptimize(nearest_site_transform(s.truth.points, 512, 512));
}

void BM_gaussian_serial(benchmark::State& state) {
    const auto& s = scene();
    for (auto _ : state) benchmark::DoNotOptimize(serial::gaussian_mask(s.truth.points, 512, 512, 5.0));
}

void BM_gaussian_omp(benchmark::State& state) {
    set_threads(state);
    const auto& s = scene();
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_mask(s.truth.points, 512, 512, 5.0));
}

void BM_assign_serial(benchmark::State& state) {
    const auto f = features();
    const auto c = centroids(f.dim);
    for (auto _ : state) benchmark::DoNotOptimize(serial::assign_to_centroids(f, c));
}

void BM_assign_omp(benchmark::State& state) {
    set_threads(state);
    const auto f = features();
    const auto c = centroids(f.dim);
    for (auto _ : state) benchmark::DoNotOptimize(assign_to_centroids(f, c));
}

void BM_box_mean_serial(benchmark::State& state) {
    const auto p = plane();
    for (auto _ : state) benchmark::DoNotOptimize(serial::box_mean(p, 3));
}

void BM_box_mean_omp(benchmark::State& state) {
    set_threads(state);
    const auto p = plane();
    for (auto _ : state) benchmark::DoNotOptimize(box_mean(p, 3));
}

void BM_cluster_label(benchmark::State& state) {
    set_threads(state);
    const auto& s = scene();
    for (auto _ : state) benchmark::DoNotOptimize(make_cluster_label(s.image, s.truth.points));
}

}  // namespace

BENCHMARK(BM_mip_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mip_omp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nearest_site_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nearest_site_omp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gaussian_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gaussian_omp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assign_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assign_omp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_box_mean_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_box_mean_omp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cluster_label)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
