#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "colorpack/image.hpp"

namespace cpk {

/// Flattened 3D RGB color histogram, 8 bins per channel.
/// Pixel (r,g,b) falls in bin (r/32)*64 + (g/32)*8 + b/32.
struct Histogram512 {
    static constexpr std::size_t kBins = 512;
    std::array<double, kBins> bins{};
    double total = 0.0;

    static constexpr std::size_t bin_index(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        return static_cast<std::size_t>(r >> 5) * 64 + static_cast<std::size_t>(g >> 5) * 8 + (b >> 5);
    }
};

Histogram512 compute_histogram(const FrameRGB& frame);

/// Hellinger distance in [0,1]:
///   d = sqrt(1 - sum_j sqrt(H[j] h[j]) / sqrt(mean(H) mean(h) N^2))
/// Throws std::invalid_argument if either histogram has no mass.
double hellinger_distance(const Histogram512& H, const Histogram512& h);

inline constexpr double kDistanceScale = 10000.0;

/// hellinger_distance scaled by 10,000.
double scaled_distance(const Histogram512& H, const Histogram512& h);

struct DistanceSeries {
    std::vector<double> distances;
    std::vector<int> labels;  // empty until clustered; ids are 0..k-1
    std::vector<double> modes;  // cluster centers, ascending; modes[label]

    std::size_t cluster_count() const { return modes.size(); }
};

/// Scaled distance of every frame to the sample image. When no sample is given
/// an all-black frame of the first frame's size is used.
DistanceSeries distance_series(std::span<const FrameRGB> video, const FrameRGB* sample = nullptr);
DistanceSeries distance_series(std::span<const Histogram512> histograms, const Histogram512& sample);

/// 0.3 * (p95 - p5) of the distances, never below 1.
double auto_bandwidth(std::span<const double> distances);

struct MeanShiftOptions {
    std::optional<double> bandwidth;  // auto_bandwidth when empty
    int max_iterations = 300;
    double tolerance_fraction = 1e-3;  // convergence when |shift| < fraction * bandwidth
};

/// 1-D flat-kernel mean shift. Fills labels and modes; modes are ordered
/// ascending so cluster ids are deterministic.
DistanceSeries mean_shift_cluster(DistanceSeries series, const MeanShiftOptions& options = {});

struct KeyframeSet {
    std::vector<std::size_t> indices;  // strictly increasing
    std::vector<int> source_clusters;  // parallel to indices
};

inline constexpr std::size_t kDefaultKeyframeStep = 30;

/// Within each cluster take positions 0, x, 2x, ... of its sorted frame list.
KeyframeSet select_keyframes(const DistanceSeries& series, std::size_t x = kDefaultKeyframeStep);

struct KeyframeOptions {
    MeanShiftOptions mean_shift;
    std::size_t step = kDefaultKeyframeStep;
};

struct KeyframeResult {
    DistanceSeries series;
    KeyframeSet keyframes;
    double bandwidth = 0.0;
};

/// distance_series -> mean_shift_cluster -> select_keyframes against a black sample.
KeyframeResult extract_keyframes(std::span<const FrameRGB> video, const KeyframeOptions& options = {});

}  // namespace cpk
