#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weaklab/geometry.hpp"
#include "weaklab/losses.hpp"
#include "weaklab/weak_labels.hpp"

namespace weaklab {

/// Per channel: raw intensity, 3x3 mean, 7x7 mean, 7x7 standard deviation.
inline constexpr int kFeaturesPerChannel = 4;
inline constexpr const char* kFeatureSet = "intensity,mean3,mean7,std7";

/// Mean over a (2r+1)^2 window, reflect-101 borders, separable running sums.
Grid<double> box_mean(const Grid<double>& plane, int radius);

/// Box-filter features with reflect-101 borders.
FeatureMap featurize(const Image2D& image);

std::vector<std::string> feature_names(int channels);

/// Linear per-pixel softmax classifier. Inputs are standardized with the
/// stored shift/scale before the affine map.
struct PixelClassifier {
    int feature_dim = 0;
    int classes = 2;
    std::vector<double> weights;  // feature_dim x classes, row-major
    std::vector<double> bias;     // classes
    std::vector<double> feature_shift;
    std::vector<double> feature_scale;

    static PixelClassifier zeros(int feature_dim, int classes);
};

struct TrainConfig {
    double learning_rate = 1e-2;
    int epochs = 1000;
    LossWeights weights{1.0, 1.0, 0.0, 0.5};
    std::uint64_t seed = 7;
    std::string feature_set = kFeatureSet;
};

struct TrainingSample {
    Image2D image;
    ClusterLabel label;
};

struct TrainResult {
    PixelClassifier classifier;
    /// Entry e is the loss after e updates; entry 0 is the initial model.
    std::vector<LossBreakdown> trace;
};

/// Full-batch gradient descent on the composite loss (no regression term).
TrainResult train(const TrainConfig& config, const std::vector<TrainingSample>& samples);

LogitMap predict_logits(const PixelClassifier& classifier, const FeatureMap& features);
ProbMap predict(const PixelClassifier& classifier, const Image2D& image);
ProbMap predict(const PixelClassifier& classifier, const FeatureMap& features);

/// Loss breakdown of `classifier` over `samples`, as recorded in a training trace.
LossBreakdown evaluate(const PixelClassifier& classifier, const std::vector<TrainingSample>& samples,
                       const LossWeights& weights);

/// Centroids of 4-connected components of {p_nuclei > threshold} with at
/// least `min_area` pixels.
PointSet detect_centers(const ProbMap& probs, double threshold = 0.5, int min_area = 9,
                        int nuclei_class = kForegroundClass);

/// Mean prediction entropy over pixels where `region` is set.
double mean_entropy(const ProbMap& probs, const Mask& region);

}  // namespace weaklab
