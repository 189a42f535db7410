#pragma once

#include <cstdint>

namespace cpk {

inline constexpr double kMiB = 1024.0 * 1024.0;
inline constexpr double kGiB = kMiB * 1024.0;

/// Frame rate as a rational so 30000/1001 survives a round trip.
struct FrameRate {
    std::uint16_t numerator = 30;
    std::uint16_t denominator = 1;

    double value() const { return static_cast<double>(numerator) / denominator; }
    bool operator==(const FrameRate&) const = default;
};

struct VideoMeta {
    int width = 0;
    int height = 0;
    std::uint32_t frame_count = 0;
    FrameRate fps;

    std::uint64_t pixels_per_frame() const { return static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height); }
    /// Uncompressed 24-bit size.
    std::uint64_t raw_size() const { return 3 * grayscale_size(); }
    /// One byte per pixel per frame.
    std::uint64_t grayscale_size() const { return pixels_per_frame() * frame_count; }

    bool operator==(const VideoMeta&) const = default;
};

/// Throws std::invalid_argument unless every field is positive.
void validate(const VideoMeta& meta);

/// round(seconds * fps)
std::uint32_t frames_for_duration(double seconds, FrameRate fps);

struct BandwidthReport {
    std::uint64_t raw_size = 0;
    std::uint64_t package_size = 0;  // grayscale payload + model
    std::uint64_t model_size = 0;
    std::int64_t saved = 0;          // raw - package; negative when the model dominates
    double percent_saved = 0.0;      // 100 * saved / raw

    double raw_mib() const { return raw_size / kMiB; }
    double package_mib() const { return package_size / kMiB; }
    double model_mib() const { return model_size / kMiB; }
    double saved_mib() const { return static_cast<double>(saved) / kMiB; }
    double saved_gib() const { return static_cast<double>(saved) / kGiB; }
};

/// Savings from sending the grayscale stream plus a model instead of raw RGB24.
/// Sizes are reported in binary units (MiB/GiB).
BandwidthReport bandwidth_stats(const VideoMeta& meta, std::uint64_t model_size);

}  // namespace cpk
