#include "weaklab/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weaklab/diag.hpp"

namespace weaklab {

TargetMap targets_from_label(const ClusterLabel& label) {
    TargetMap t(label.height, label.width, 0);
    for (std::size_t i = 0; i < t.size(); ++i) t.data[i] = label.data[i] == PixelClass::nuclei ? 1 : 0;
    return t;
}

RegionMask regions_from_label(const ClusterLabel& label) {
    RegionMask m{Mask(label.height, label.width, 0), Mask(label.height, label.width, 0)};
    for (std::size_t i = 0; i < label.size(); ++i) {
        const bool ignored = label.data[i] == PixelClass::ignored;
        m.ignored.data[i] = ignored ? 1 : 0;
        m.labeled.data[i] = ignored ? 0 : 1;
    }
    return m;
}

ProbMap softmax(const LogitMap& logits) {
    ProbMap p(logits.height, logits.width, logits.classes);
    const int m = logits.classes;
    for (std::size_t i = 0; i < logits.pixel_count(); ++i) {
        const double* z = logits.pixel(i);
        double* out = p.pixel(i);
        double zmax = z[0];
        for (int k = 0; k < m; ++k) {
            if (!std::isfinite(z[k])) throw InvalidInput("softmax input contains a non-finite logit");
            zmax = std::max(zmax, z[k]);
        }
        double sum = 0.0;
        for (int k = 0; k < m; ++k) sum += out[k] = std::exp(z[k] - zmax);
        for (int k = 0; k < m; ++k) out[k] /= sum;
    }
    return p;
}

double entropy(const double* p, int classes) noexcept {
    double h = 0.0;
    for (int k = 0; k < classes; ++k)
        if (p[k] > 0.0) h -= p[k] * std::log(std::max(p[k], kProbClamp));
    return h;
}

namespace {

void require_shape(const ProbMap& probs, const auto& grid, const char* what) {
    if (probs.height != grid.height || probs.width != grid.width)
        throw InvalidInput(std::string(what) + " does not match the prediction size");
}

std::size_t count_set(const Mask& m) {
    return static_cast<std::size_t>(std::count_if(m.data.begin(), m.data.end(), [](auto v) { return v != 0; }));
}

}  // namespace

LossValue cross_entropy(const ProbMap& probs, const TargetMap& target, const RegionMask& mask) {
    require_shape(probs, target, "target");
    require_shape(probs, mask.labeled, "labeled mask");
    LossValue out{0.0, ClassMap(probs.height, probs.width, probs.classes)};
    const std::size_t n = count_set(mask.labeled);
    if (n == 0) {
        warn("cross-entropy: no labeled pixels");
        return out;
    }
    const double inv = 1.0 / static_cast<double>(n);
    const int m = probs.classes;
    for (std::size_t i = 0; i < probs.pixel_count(); ++i) {
        if (!mask.labeled.data[i]) continue;
        const int t = target.data[i];
        if (t >= m) throw InvalidInput("target class " + std::to_string(t) + " out of range");
        const double* p = probs.pixel(i);
        out.value -= std::log(std::clamp(p[t], kProbClamp, 1.0));
        double* g = out.grad.pixel(i);
        for (int k = 0; k < m; ++k) g[k] = (p[k] - (k == t ? 1.0 : 0.0)) * inv;
    }
    out.value *= inv;
    return out;
}

LossValue dice_loss(const ProbMap& probs, const TargetMap& target, const RegionMask& mask, double smooth,
                    int foreground) {
    require_shape(probs, target, "target");
    require_shape(probs, mask.labeled, "labeled mask");
    if (foreground < 0 || foreground >= probs.classes) throw InvalidInput("foreground class out of range");
    LossValue out{0.0, ClassMap(probs.height, probs.width, probs.classes)};
    if (count_set(mask.labeled) == 0) {
        warn("dice: no labeled pixels");
        return out;
    }
    double inter = 0.0, psum = 0.0, tsum = 0.0;
    for (std::size_t i = 0; i < probs.pixel_count(); ++i) {
        if (!mask.labeled.data[i]) continue;
        const double p = probs.pixel(i)[foreground];
        const double t = target.data[i] == foreground ? 1.0 : 0.0;
        inter += p * t;
        psum += p;
        tsum += t;
    }
    const double num = 2.0 * inter + smooth;
    const double den = psum + tsum + smooth;
    out.value = 1.0 - num / den;

    const int m = probs.classes;
    for (std::size_t i = 0; i < probs.pixel_count(); ++i) {
        if (!mask.labeled.data[i]) continue;
        const double* p = probs.pixel(i);
        const double t = target.data[i] == foreground ? 1.0 : 0.0;
        const double dl_dp = -(2.0 * t * den - num) / (den * den);
        double* g = out.grad.pixel(i);
        for (int k = 0; k < m; ++k) g[k] = dl_dp * p[foreground] * ((k == foreground ? 1.0 : 0.0) - p[k]);
    }
    return out;
}

LossValue entropy_min(const ProbMap& probs, const RegionMask& mask) {
    require_shape(probs, mask.ignored, "ignored mask");
    LossValue out{0.0, ClassMap(probs.height, probs.width, probs.classes)};
    const std::size_t n = count_set(mask.ignored);
    if (n == 0) return out;
    const double inv = 1.0 / static_cast<double>(n);
    const int m = probs.classes;
    for (std::size_t i = 0; i < probs.pixel_count(); ++i) {
        if (!mask.ignored.data[i]) continue;
        const double* p = probs.pixel(i);
        const double h = entropy(p, m);
        out.value += h;
        double* g = out.grad.pixel(i);
        for (int k = 0; k < m; ++k) g[k] = -p[k] * (std::log(std::max(p[k], kProbClamp)) + h) * inv;
    }
    out.value *= inv;
    return out;
}

RegressionValue mse_loss(const HoVerTarget& pred, const HoVerTarget& target, const RegionMask& mask,
                         bool all_pixels) {
    if (!pred.h.same_shape(target.h) || !pred.v.same_shape(target.v) || !pred.h.same_shape(pred.v))
        throw InvalidInput("regression prediction and target differ in size");
    if (!all_pixels && !pred.h.same_shape(mask.labeled)) throw InvalidInput("labeled mask does not match the maps");
    const int h = pred.h.height;
    const int w = pred.h.width;
    RegressionValue out{0.0, {Grid<double>(h, w, 0.0), Grid<double>(h, w, 0.0)}};
    const std::size_t n = all_pixels ? pred.h.size() : count_set(mask.labeled);
    if (n == 0) {
        warn("regression: no pixels selected");
        return out;
    }
    const double denom = 2.0 * static_cast<double>(n);
    for (std::size_t i = 0; i < pred.h.size(); ++i) {
        if (!all_pixels && !mask.labeled.data[i]) continue;
        const double eh = pred.h.data[i] - target.h.data[i];
        const double ev = pred.v.data[i] - target.v.data[i];
        out.value += eh * eh + ev * ev;
        out.grad.h.data[i] = 2.0 * eh / denom;
        out.grad.v.data[i] = 2.0 * ev / denom;
    }
    out.value /= denom;
    return out;
}

CompositeResult composite_loss(const LogitMap& logits, const HoVerTarget* hover_pred,
                               const CompositeTargets& targets, const RegionMask& mask,
                               const LossWeights& weights) {
    for (double w : {weights.ce, weights.dice, weights.mse, weights.entropy})
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("loss weights must be finite and non-negative");

    const ProbMap probs = softmax(logits);
    const auto ce = cross_entropy(probs, targets.classes, mask);
    const auto dice = dice_loss(probs, targets.classes, mask);
    const auto ent = entropy_min(probs, mask);

    CompositeResult r;
    r.breakdown.weights = weights;
    r.breakdown.ce = ce.value;
    r.breakdown.dice = dice.value;
    r.breakdown.entropy = ent.value;
    r.logit_grad = ClassMap(logits.height, logits.width, logits.classes);
    for (std::size_t t = 0; t < r.logit_grad.values.size(); ++t)
        r.logit_grad.values[t] = weights.ce * ce.grad.values[t] + weights.dice * dice.grad.values[t] +
                                 weights.entropy * ent.grad.values[t];

    if (hover_pred != nullptr) {
        auto reg = mse_loss(*hover_pred, targets.hover, mask);
        r.breakdown.mse = reg.value;
        for (auto* g : {&reg.grad.h, &reg.grad.v})
            for (double& x : g->data) x *= weights.mse;
        r.hover_grad = std::move(reg.grad);
    }
    r.breakdown.total = weights.ce * r.breakdown.ce + weights.dice * r.breakdown.dice +
                        weights.mse * r.breakdown.mse + weights.entropy * r.breakdown.entropy;
    return r;
}

}  // namespace weaklab
