#pragma once

#include <span>
#include <vector>

#include "colorpack/colorizer.hpp"
#include "colorpack/keyframes.hpp"
#include "colorpack/package.hpp"

namespace cpk {

struct EncodeOptions {
    KeyframeOptions keyframes;
    TrainConfig train;
    FrameRate fps;
    TrainProgress progress;
};

struct EncodeResult {
    Package package;
    KeyframeResult keyframes;
    std::vector<double> loss_history;
    BandwidthReport report;
};

/// Sender side: pick keyframes, train a colorizer on them from a seeded
/// initialization, and package the L stream with the serialized model.
EncodeResult encode(std::span<const FrameRGB> frames, const EncodeOptions& options);

/// Receiver side: colorize every transmitted grayscale plane in order.
std::vector<FrameRGB> decode(const Package& package);

struct FrameMetrics {
    double mse_rgb = 0.0;
    double psnr = 0.0;    // +inf for identical frames
    double ab_mse = 0.0;  // over normalized a,b, mean of 2*H*W elements
};

struct VideoMetrics {
    std::vector<FrameMetrics> frames;
    double mean_psnr = 0.0;    // mean of per-frame PSNR
    double pooled_psnr = 0.0;  // PSNR of the mean RGB MSE
    double mean_ab_mse = 0.0;
};

double psnr_from_mse(double mse);
FrameMetrics evaluate_frame(const FrameRGB& decoded, const FrameRGB& original);
VideoMetrics evaluate(std::span<const FrameRGB> decoded, std::span<const FrameRGB> original);

}  // namespace cpk
