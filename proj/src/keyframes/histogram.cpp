#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "colorpack/keyframes.hpp"

namespace cpk {

Histogram512 compute_histogram(const FrameRGB& frame) {
    validate(frame);
    std::array<std::size_t, Histogram512::kBins> counts{};
    const std::size_t n = frame.pixel_count();
    const std::uint8_t* p = frame.data.data();
    for (std::size_t i = 0; i < n; ++i, p += 3) ++counts[Histogram512::bin_index(p[0], p[1], p[2])];

    Histogram512 hist;
    for (std::size_t j = 0; j < Histogram512::kBins; ++j) hist.bins[j] = static_cast<double>(counts[j]);
    hist.total = static_cast<double>(n);
    return hist;
}

double hellinger_distance(const Histogram512& H, const Histogram512& h) {
    constexpr double N = Histogram512::kBins;
    double sum_H = 0.0;
    double sum_h = 0.0;
    double overlap = 0.0;
    for (std::size_t j = 0; j < Histogram512::kBins; ++j) {
        if (H.bins[j] < 0.0 || h.bins[j] < 0.0) throw std::invalid_argument("histogram has negative bin");
        sum_H += H.bins[j];
        sum_h += h.bins[j];
        overlap += std::sqrt(H.bins[j] * h.bins[j]);
    }
    if (!(sum_H > 0.0) || !(sum_h > 0.0)) {
        throw std::invalid_argument("hellinger_distance: histogram with zero mass");
    }
    const double mean_H = sum_H / N;
    const double mean_h = sum_h / N;
    const double coefficient = overlap / std::sqrt(mean_H * mean_h * N * N);
    return std::sqrt(std::clamp(1.0 - coefficient, 0.0, 1.0));
}

double scaled_distance(const Histogram512& H, const Histogram512& h) {
    return kDistanceScale * hellinger_distance(H, h);
}

DistanceSeries distance_series(std::span<const Histogram512> histograms, const Histogram512& sample) {
    if (histograms.empty()) throw std::invalid_argument("distance_series: no frames");
    DistanceSeries series;
    series.distances.reserve(histograms.size());
    for (const auto& h : histograms) series.distances.push_back(scaled_distance(sample, h));
    return series;
}

DistanceSeries distance_series(std::span<const FrameRGB> video, const FrameRGB* sample) {
    if (video.empty()) throw std::invalid_argument("distance_series: no frames");
    const FrameRGB black(video.front().width, video.front().height);
    const Histogram512 reference = compute_histogram(sample ? *sample : black);

    DistanceSeries series;
    series.distances.reserve(video.size());
    for (const auto& frame : video) series.distances.push_back(scaled_distance(reference, compute_histogram(frame)));
    return series;
}

}  // namespace cpk
