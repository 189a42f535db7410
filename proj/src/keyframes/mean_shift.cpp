#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "colorpack/keyframes.hpp"

namespace cpk {

namespace {

double percentile(std::vector<double> sorted, double p) {
    std::sort(sorted.begin(), sorted.end());
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Flat-kernel window means over a sorted 1-D sample via prefix sums.
class WindowMean {
public:
    explicit WindowMean(std::vector<double> sorted) : points_(std::move(sorted)), prefix_(points_.size() + 1, 0.0) {
        for (std::size_t i = 0; i < points_.size(); ++i) prefix_[i + 1] = prefix_[i] + points_[i];
    }

    // Mean of points in [center - radius, center + radius]; nullopt if empty.
    std::optional<double> operator()(double center, double radius) const {
        const auto lo = std::lower_bound(points_.begin(), points_.end(), center - radius) - points_.begin();
        const auto hi = std::upper_bound(points_.begin(), points_.end(), center + radius) - points_.begin();
        if (hi <= lo) return std::nullopt;
        return (prefix_[hi] - prefix_[lo]) / static_cast<double>(hi - lo);
    }

private:
    std::vector<double> points_;
    std::vector<double> prefix_;
};

}  // namespace

double auto_bandwidth(std::span<const double> distances) {
    if (distances.empty()) throw std::invalid_argument("auto_bandwidth: empty series");
    std::vector<double> v(distances.begin(), distances.end());
    const double spread = percentile(v, 0.95) - percentile(v, 0.05);
    return std::max(1.0, 0.3 * spread);
}

DistanceSeries mean_shift_cluster(DistanceSeries series, const MeanShiftOptions& options) {
    const auto& points = series.distances;
    if (points.empty()) throw std::invalid_argument("mean_shift_cluster: empty series");
    const double bandwidth = options.bandwidth ? *options.bandwidth : auto_bandwidth(points);
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw std::invalid_argument("mean_shift_cluster: bandwidth must be positive");
    }

    std::vector<double> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    const WindowMean window_mean(sorted);
    const double tolerance = options.tolerance_fraction * bandwidth;

    std::vector<double> converged(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        double x = points[i];
        for (int it = 0; it < options.max_iterations; ++it) {
            const auto next = window_mean(x, bandwidth);
            if (!next) break;
            const double shift = *next - x;
            x = *next;
            if (std::abs(shift) < tolerance) break;
        }
        converged[i] = x;
    }

    // Merge converged points lying within bandwidth/2 of a group's first member.
    std::vector<double> ordered = converged;
    std::sort(ordered.begin(), ordered.end());
    std::vector<double> centers;
    std::size_t start = 0;
    while (start < ordered.size()) {
        std::size_t end = start + 1;
        while (end < ordered.size() && ordered[end] - ordered[start] <= 0.5 * bandwidth) ++end;
        const double sum = std::accumulate(ordered.begin() + start, ordered.begin() + end, 0.0);
        centers.push_back(sum / static_cast<double>(end - start));
        start = end;
    }

    auto nearest = [&](double v) {
        int best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double gap = std::abs(v - centers[c]);
            if (gap < best_gap) {  // strict: ties stay with the lower id
                best_gap = gap;
                best = static_cast<int>(c);
            }
        }
        return best;
    };

    std::vector<int> raw_labels(points.size());
    std::vector<std::size_t> population(centers.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        raw_labels[i] = nearest(points[i]);
        ++population[raw_labels[i]];
    }

    // Drop centers that attracted no frame so ids stay contiguous.
    std::vector<int> remap(centers.size(), -1);
    series.modes.clear();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        if (population[c] == 0) continue;
        remap[c] = static_cast<int>(series.modes.size());
        series.modes.push_back(centers[c]);
    }
    series.labels.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) series.labels[i] = remap[raw_labels[i]];
    return series;
}

}  // namespace cpk
