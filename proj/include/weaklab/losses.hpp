#pragma once

#include <cstdint>
#include <vector>

#include "weaklab/grid.hpp"
#include "weaklab/hover.hpp"
#include "weaklab/weak_labels.hpp"

namespace weaklab {

/// Per-pixel class scores, pixel-major: values[pixel * classes + i].
struct ClassMap {
    int height = 0;
    int width = 0;
    int classes = 0;
    std::vector<double> values;

    ClassMap() = default;
    ClassMap(int h, int w, int m, double fill = 0.0)
        : height(h), width(w), classes(m),
          values(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                     static_cast<std::size_t>(m),
                 fill) {}

    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    double* pixel(std::size_t i) noexcept { return values.data() + i * classes; }
    const double* pixel(std::size_t i) const noexcept { return values.data() + i * classes; }
};

using LogitMap = ClassMap;
using ProbMap = ClassMap;

/// Target class index per pixel.
using TargetMap = Grid<std::uint8_t>;

struct RegionMask {
    Mask labeled;
    Mask ignored;
};

/// background -> 0, nuclei -> 1; ignored pixels become 0 and must be masked.
TargetMap targets_from_label(const ClusterLabel& label);
RegionMask regions_from_label(const ClusterLabel& label);

inline constexpr double kProbClamp = 1e-12;
inline constexpr double kDiceSmooth = 1e-3;
inline constexpr int kForegroundClass = 1;

/// Max-subtracted softmax. Throws InvalidInput on non-finite logits.
ProbMap softmax(const LogitMap& logits);

/// Loss value with its gradient with respect to the logits (same layout).
struct LossValue {
    double value = 0.0;
    ClassMap grad;
};

/// Mean of -log p_target over labeled pixels.
LossValue cross_entropy(const ProbMap& probs, const TargetMap& target, const RegionMask& mask);

/// 1 - (2 sum(p t) + s) / (sum p + sum t + s) on the foreground class, labeled pixels only.
LossValue dice_loss(const ProbMap& probs, const TargetMap& target, const RegionMask& mask,
                    double smooth = kDiceSmooth, int foreground = kForegroundClass);

/// Mean Shannon entropy of the predictions over ignored pixels.
LossValue entropy_min(const ProbMap& probs, const RegionMask& mask);

/// Per-pixel entropy (natural log, 0 log 0 = 0).
double entropy(const double* p, int classes) noexcept;

struct RegressionValue {
    double value = 0.0;
    HoVerTarget grad;
};

/// Mean over selected pixels and both channels of the squared error. By
/// default only labeled pixels count; `all_pixels` widens it to the full map.
RegressionValue mse_loss(const HoVerTarget& pred, const HoVerTarget& target, const RegionMask& mask,
                         bool all_pixels = false);

struct LossWeights {
    double ce = 1.0;
    double dice = 1.0;
    double mse = 1.0;
    double entropy = 0.5;
};

struct LossBreakdown {
    double ce = 0.0;
    double dice = 0.0;
    double mse = 0.0;
    double entropy = 0.0;
    double total = 0.0;
    LossWeights weights{};
};

struct CompositeTargets {
    TargetMap classes;
    HoVerTarget hover;
};

struct CompositeResult {
    LossBreakdown breakdown;
    ClassMap logit_grad;
    HoVerTarget hover_grad;
};

/// Weighted CE + dice + regression on labeled pixels plus entropy on ignored
/// pixels. `hover_pred` may be null, in which case the regression term is 0.
CompositeResult composite_loss(const LogitMap& logits, const HoVerTarget* hover_pred,
                               const CompositeTargets& targets, const RegionMask& mask,
                               const LossWeights& weights = {});

}  // namespace weaklab
