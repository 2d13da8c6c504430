#include "weaklab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace weaklab {

MatchReport match_detections(const PointSet& detections, const PointSet& annotations, const MatchConfig& config) {
    if (!(config.r_nuc > 0.0)) throw InvalidInput("r_nuc must be positive");
    std::vector<MatchPair> candidates;
    for (std::size_t a = 0; a < annotations.size(); ++a) {
        for (std::size_t d = 0; d < detections.size(); ++d) {
            const double dist = std::hypot(detections[d].x - annotations[a].x, detections[d].y - annotations[a].y);
            if (dist <= config.r_nuc)
                candidates.push_back({static_cast<int>(d), static_cast<int>(a), dist});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const MatchPair& l, const MatchPair& r) {
        return std::tie(l.distance, l.annotation, l.detection) < std::tie(r.distance, r.annotation, r.detection);
    });

    std::vector<char> det_used(detections.size(), 0);
    std::vector<char> ann_used(annotations.size(), 0);
    MatchReport report;
    for (const auto& c : candidates) {
        if (det_used[static_cast<std::size_t>(c.detection)] || ann_used[static_cast<std::size_t>(c.annotation)]) continue;
        det_used[static_cast<std::size_t>(c.detection)] = 1;
        ann_used[static_cast<std::size_t>(c.annotation)] = 1;
        report.pairs.push_back(c);
    }
    report.tp = static_cast<int>(report.pairs.size());
    report.fp = static_cast<int>(detections.size()) - report.tp;
    report.fn = static_cast<int>(annotations.size()) - report.tp;
    return report;
}

DetectionScores prf1(const MatchReport& report) {
    const double tp = report.tp;
    const double fp = report.fp;
    const double fn = report.fn;
    DetectionScores s;
    s.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    s.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    s.f1 = 2 * tp + fp + fn > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
    return s;
}

DetectionScores aggregate(std::span<const MatchReport> reports) {
    if (reports.empty()) throw InvalidInput("aggregate needs at least one report");
    MatchReport total;
    for (const auto& r : reports) {
        total.tp += r.tp;
        total.fp += r.fp;
        total.fn += r.fn;
    }
    return prf1(total);
}

}  // namespace weaklab
