#pragma once

#include <span>
#include <vector>

#include "weaklab/geometry.hpp"

namespace weaklab {

struct MatchConfig {
    double r_nuc = 11.0;
};

struct MatchPair {
    int detection = 0;
    int annotation = 0;
    double distance = 0.0;
};

struct MatchReport {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    std::vector<MatchPair> pairs;
};

struct DetectionScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// One-to-one greedy matching: candidate pairs within r_nuc are accepted in
/// ascending distance order (ties by annotation index, then detection index)
/// when both ends are still free.
MatchReport match_detections(const PointSet& detections, const PointSet& annotations,
                             const MatchConfig& config = {});

/// P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2TP/(2TP+FP+FN); 0 on empty denominators.
DetectionScores prf1(const MatchReport& report);

/// Micro-average: counts are summed before scoring.
DetectionScores aggregate(std::span<const MatchReport> reports);

}  // namespace weaklab
