#include "weaklab/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <string>

#include "weaklab/parallel.hpp"

namespace weaklab {

namespace {

int reflect101(int i, int n) noexcept {
    if (n == 1) return 0;
    while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
    return i;
}

Grid<double> channel_plane(const Image2D& image, int ch) {
    Grid<double> plane(image.height, image.width);
    for (int r = 0; r < image.height; ++r)
        for (int c = 0; c < image.width; ++c) plane(r, c) = image.at(r, c, ch);
    return plane;
}

}  // namespace

Grid<double> box_mean(const Grid<double>& plane, int radius) {
    if (radius < 0) throw InvalidInput("box radius must be non-negative");
    const int h = plane.height;
    const int w = plane.width;
    Grid<double> horizontal(h, w);
    Grid<double> out(h, w);
    const double inv = 1.0 / static_cast<double>((2 * radius + 1) * (2 * radius + 1));
#pragma omp parallel num_threads(configured_threads())
    {
#pragma omp for schedule(static)
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                double s = 0.0;
                for (int d = -radius; d <= radius; ++d) s += plane(r, reflect101(c + d, w));
                horizontal(r, c) = s;
            }
#pragma omp for schedule(static)
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                double s = 0.0;
                for (int d = -radius; d <= radius; ++d) s += horizontal(reflect101(r + d, h), c);
                out(r, c) = s * inv;
            }
    }
    return out;
}

std::vector<std::string> feature_names(int channels) {
    std::vector<std::string> names;
    for (int ch = 0; ch < channels; ++ch)
        for (const char* base : {"intensity", "mean3", "mean7", "std7"})
            names.push_back(std::string(base) + "_c" + std::to_string(ch));
    return names;
}

FeatureMap featurize(const Image2D& image) {
    FeatureMap fm;
    fm.height = image.height;
    fm.width = image.width;
    fm.dim = kFeaturesPerChannel * image.channels;
    fm.features.assign(fm.pixel_count() * static_cast<std::size_t>(fm.dim), 0.0);
    for (int ch = 0; ch < image.channels; ++ch) {
        const auto plane = channel_plane(image, ch);
        const auto mean3 = box_mean(plane, 1);
        const auto mean7 = box_mean(plane, 3);
        const int base = kFeaturesPerChannel * ch;
#pragma omp parallel for schedule(static) num_threads(configured_threads())
        for (int r = 0; r < image.height; ++r)
            for (int c = 0; c < image.width; ++c) {
                const double m = mean7(r, c);
                double var = 0.0;
                for (int dr = -3; dr <= 3; ++dr)
                    for (int dc = -3; dc <= 3; ++dc) {
                        const double e = plane(reflect101(r + dr, image.height), reflect101(c + dc, image.width)) - m;
                        var += e * e;
                    }
                double* f = fm.features.data() + plane.index(r, c) * static_cast<std::size_t>(fm.dim) + base;
                f[0] = plane(r, c);
                f[1] = mean3(r, c);
                f[2] = m;
                f[3] = std::sqrt(var / 49.0);
            }
    }
    return fm;
}

PixelClassifier PixelClassifier::zeros(int feature_dim, int classes) {
    PixelClassifier pc;
    pc.feature_dim = feature_dim;
    pc.classes = classes;
    pc.weights.assign(static_cast<std::size_t>(feature_dim * classes), 0.0);
    pc.bias.assign(static_cast<std::size_t>(classes), 0.0);
    pc.feature_shift.assign(static_cast<std::size_t>(feature_dim), 0.0);
    pc.feature_scale.assign(static_cast<std::size_t>(feature_dim), 1.0);
    return pc;
}

LogitMap predict_logits(const PixelClassifier& pc, const FeatureMap& features) {
    if (features.dim != pc.feature_dim)
        throw InvalidInput("classifier expects " + std::to_string(pc.feature_dim) + " features, got " +
                           std::to_string(features.dim));
    LogitMap logits(features.height, features.width, pc.classes);
    const auto n = static_cast<std::ptrdiff_t>(features.pixel_count());
    const int dim = pc.feature_dim;
    const int m = pc.classes;
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* x = features.pixel(static_cast<std::size_t>(i));
        double* z = logits.pixel(static_cast<std::size_t>(i));
        for (int k = 0; k < m; ++k) z[k] = pc.bias[static_cast<std::size_t>(k)];
        for (int f = 0; f < dim; ++f) {
            const double xf = (x[f] - pc.feature_shift[static_cast<std::size_t>(f)]) * pc.feature_scale[static_cast<std::size_t>(f)];
            const double* wrow = pc.weights.data() + static_cast<std::size_t>(f * m);
            for (int k = 0; k < m; ++k) z[k] += xf * wrow[k];
        }
    }
    return logits;
}

ProbMap predict(const PixelClassifier& pc, const FeatureMap& features) { return softmax(predict_logits(pc, features)); }

ProbMap predict(const PixelClassifier& pc, const Image2D& image) { return predict(pc, featurize(image)); }

namespace {

struct PreparedSample {
    FeatureMap features;
    CompositeTargets targets;
    RegionMask regions;
};

std::vector<PreparedSample> prepare(const std::vector<TrainingSample>& samples) {
    std::vector<PreparedSample> out;
    out.reserve(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const auto& smp = samples[s];
        if (smp.image.height != smp.label.height || smp.image.width != smp.label.width)
            throw InvalidInput("training sample " + std::to_string(s) + ": label and image sizes differ");
        out.push_back({featurize(smp.image), {targets_from_label(smp.label), {}}, regions_from_label(smp.label)});
    }
    return out;
}

struct Evaluation {
    LossBreakdown breakdown;
    std::vector<ClassMap> grads;
};

Evaluation evaluate_prepared(const PixelClassifier& pc, const std::vector<PreparedSample>& prepared,
                             const LossWeights& weights, bool want_grads) {
    Evaluation ev;
    ev.breakdown.weights = weights;
    const double inv = 1.0 / static_cast<double>(prepared.size());
    for (const auto& s : prepared) {
        auto r = composite_loss(predict_logits(pc, s.features), nullptr, s.targets, s.regions, weights);
        ev.breakdown.ce += r.breakdown.ce * inv;
        ev.breakdown.dice += r.breakdown.dice * inv;
        ev.breakdown.mse += r.breakdown.mse * inv;
        ev.breakdown.entropy += r.breakdown.entropy * inv;
        ev.breakdown.total += r.breakdown.total * inv;
        if (want_grads) ev.grads.push_back(std::move(r.logit_grad));
    }
    return ev;
}

bool finite(const LossBreakdown& b) {
    return std::isfinite(b.total) && std::isfinite(b.ce) && std::isfinite(b.dice) && std::isfinite(b.entropy);
}

}  // namespace

LossBreakdown evaluate(const PixelClassifier& classifier, const std::vector<TrainingSample>& samples,
                       const LossWeights& weights) {
    if (samples.empty()) throw InvalidInput("evaluation needs at least one sample");
    return evaluate_prepared(classifier, prepare(samples), weights, false).breakdown;
}

TrainResult train(const TrainConfig& config, const std::vector<TrainingSample>& samples) {
    if (!(config.learning_rate > 0.0)) throw InvalidInput("learning rate must be positive");
    if (config.epochs < 1) throw InvalidInput("epochs must be at least 1");
    if (samples.empty()) throw InvalidInput("training needs at least one labelled image");
    if (config.feature_set != kFeatureSet) throw InvalidInput("unsupported feature set '" + config.feature_set + "'");

    const auto prepared = prepare(samples);
    const int dim = prepared.front().features.dim;
    for (const auto& s : prepared)
        if (s.features.dim != dim) throw InvalidInput("training images differ in channel count");
    constexpr int m = 2;

    PixelClassifier pc = PixelClassifier::zeros(dim, m);
    // Standardize inputs with statistics over every training pixel.
    double count = 0.0;
    std::vector<double> sum(static_cast<std::size_t>(dim), 0.0), sq(static_cast<std::size_t>(dim), 0.0);
    for (const auto& s : prepared)
        for (std::size_t i = 0; i < s.features.pixel_count(); ++i) {
            const double* x = s.features.pixel(i);
            for (int f = 0; f < dim; ++f) sum[static_cast<std::size_t>(f)] += x[f];
            count += 1.0;
        }
    for (int f = 0; f < dim; ++f) pc.feature_shift[static_cast<std::size_t>(f)] = sum[static_cast<std::size_t>(f)] / count;
    for (const auto& s : prepared)
        for (std::size_t i = 0; i < s.features.pixel_count(); ++i) {
            const double* x = s.features.pixel(i);
            for (int f = 0; f < dim; ++f) {
                const double e = x[f] - pc.feature_shift[static_cast<std::size_t>(f)];
                sq[static_cast<std::size_t>(f)] += e * e;
            }
        }
    for (int f = 0; f < dim; ++f) {
        const double sd = std::sqrt(sq[static_cast<std::size_t>(f)] / count);
        pc.feature_scale[static_cast<std::size_t>(f)] = sd > 1e-12 ? 1.0 / sd : 1.0;
    }

    std::mt19937_64 rng(config.seed);
    for (double& w : pc.weights) w = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 0.02;

    TrainResult result;
    result.trace.reserve(static_cast<std::size_t>(config.epochs) + 1);
    constexpr std::size_t kBlock = 4096;
    for (int epoch = 0;; ++epoch) {
        bool params_finite = true;
        for (double v : pc.weights) params_finite = params_finite && std::isfinite(v);
        for (double v : pc.bias) params_finite = params_finite && std::isfinite(v);
        if (!params_finite) throw TrainingError("training diverged: non-finite parameters at epoch " + std::to_string(epoch), epoch);
        Evaluation ev;
        try {
            ev = evaluate_prepared(pc, prepared, config.weights, epoch < config.epochs);
        } catch (const InvalidInput&) {
            throw TrainingError("training diverged: non-finite logits at epoch " + std::to_string(epoch), epoch);
        }
        if (!finite(ev.breakdown)) throw TrainingError("training diverged: non-finite loss at epoch " + std::to_string(epoch), epoch);
        result.trace.push_back(ev.breakdown);
        if (epoch == config.epochs) break;

        // d(total)/dW = mean over samples of sum_pixels x_hat (outer) dlogits.
        const std::size_t stride = static_cast<std::size_t>((dim + 1) * m);
        std::vector<double> grad(stride, 0.0);
        const double inv_samples = 1.0 / static_cast<double>(prepared.size());
        for (std::size_t s = 0; s < prepared.size(); ++s) {
            const auto& fm = prepared[s].features;
            const auto& g = ev.grads[s];
            const std::size_t n = fm.pixel_count();
            const std::size_t blocks = (n + kBlock - 1) / kBlock;
            std::vector<double> partial(blocks * stride, 0.0);
#pragma omp parallel for schedule(static) num_threads(configured_threads())
            for (std::size_t b = 0; b < blocks; ++b) {
                double* acc = partial.data() + b * stride;
                for (std::size_t i = b * kBlock, end = std::min(n, (b + 1) * kBlock); i < end; ++i) {
                    const double* gi = g.pixel(i);
                    if (gi[0] == 0.0 && gi[1] == 0.0) continue;
                    const double* x = fm.pixel(i);
                    for (int f = 0; f < dim; ++f) {
                        const double xf = (x[f] - pc.feature_shift[static_cast<std::size_t>(f)]) * pc.feature_scale[static_cast<std::size_t>(f)];
                        for (int k = 0; k < m; ++k) acc[f * m + k] += xf * gi[k];
                    }
                    for (int k = 0; k < m; ++k) acc[dim * m + k] += gi[k];
                }
            }
            for (std::size_t b = 0; b < blocks; ++b)
                for (std::size_t t = 0; t < stride; ++t) grad[t] += partial[b * stride + t] * inv_samples;
        }
        for (std::size_t t = 0; t < pc.weights.size(); ++t) pc.weights[t] -= config.learning_rate * grad[t];
        for (int k = 0; k < m; ++k)
            pc.bias[static_cast<std::size_t>(k)] -= config.learning_rate * grad[static_cast<std::size_t>(dim * m + k)];
    }
    result.classifier = std::move(pc);
    return result;
}

PointSet detect_centers(const ProbMap& probs, double threshold, int min_area, int nuclei_class) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidInput("threshold must lie in (0, 1)");
    if (nuclei_class < 0 || nuclei_class >= probs.classes) throw InvalidInput("nuclei class out of range");
    const int h = probs.height;
    const int w = probs.width;
    Mask fg(h, w, 0);
    for (std::size_t i = 0; i < fg.size(); ++i) fg.data[i] = probs.pixel(i)[nuclei_class] > threshold ? 1 : 0;

    Grid<std::int32_t> seen(h, w, 0);
    std::vector<Point> centers;
    std::deque<PixelIndex> queue;
    for (int r0 = 0; r0 < h; ++r0)
        for (int c0 = 0; c0 < w; ++c0) {
            if (!fg(r0, c0) || seen(r0, c0)) continue;
            double sx = 0, sy = 0;
            long area = 0;
            seen(r0, c0) = 1;
            queue.push_back({r0, c0});
            while (!queue.empty()) {
                const auto p = queue.front();
                queue.pop_front();
                sx += p.col;
                sy += p.row;
                ++area;
                constexpr int dr[4] = {-1, 1, 0, 0};
                constexpr int dc[4] = {0, 0, -1, 1};
                for (int d = 0; d < 4; ++d) {
                    const int r = p.row + dr[d];
                    const int c = p.col + dc[d];
                    if (fg.contains(r, c) && fg(r, c) && !seen(r, c)) {
                        seen(r, c) = 1;
                        queue.push_back({r, c});
                    }
                }
            }
            if (area < min_area) continue;
            const Point center{sx / static_cast<double>(area), sy / static_cast<double>(area)};
            const bool duplicate = std::any_of(centers.begin(), centers.end(), [&](const Point& q) {
                return std::hypot(q.x - center.x, q.y - center.y) < PointSet::kMinSeparation;
            });
            if (!duplicate) centers.push_back(center);
        }
    return PointSet(std::move(centers));
}

double mean_entropy(const ProbMap& probs, const Mask& region) {
    if (probs.height != region.height || probs.width != region.width)
        throw InvalidInput("region mask does not match the prediction size");
    double total = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < region.size(); ++i) {
        if (!region.data[i]) continue;
        total += entropy(probs.pixel(i), probs.classes);
        ++n;
    }
    return n == 0 ? 0.0 : total / static_cast<double>(n);
}

}  // namespace weaklab
