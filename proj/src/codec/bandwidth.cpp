#include "colorpack/bandwidth.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cpk {

void validate(const VideoMeta& meta) {
    if (meta.width < 1 || meta.height < 1) throw std::invalid_argument("video dimensions must be positive");
    if (meta.frame_count < 1) throw std::invalid_argument("video must have at least one frame");
    if (meta.fps.numerator < 1 || meta.fps.denominator < 1) throw std::invalid_argument("frame rate must be positive");
}

std::uint32_t frames_for_duration(double seconds, FrameRate fps) {
    if (!(seconds > 0.0) || fps.numerator < 1 || fps.denominator < 1) {
        throw std::invalid_argument("duration and frame rate must be positive");
    }
    const double frames = std::round(seconds * fps.value());
    if (frames < 1.0 || frames > std::numeric_limits<std::uint32_t>::max()) {
        throw std::invalid_argument("duration gives an unrepresentable frame count");
    }
    return static_cast<std::uint32_t>(frames);
}

BandwidthReport bandwidth_stats(const VideoMeta& meta, std::uint64_t model_size) {
    validate(meta);
    BandwidthReport r;
    r.raw_size = meta.raw_size();
    r.model_size = model_size;
    r.package_size = meta.grayscale_size() + model_size;
    r.saved = static_cast<std::int64_t>(r.raw_size) - static_cast<std::int64_t>(r.package_size);
    r.percent_saved = 100.0 * static_cast<double>(r.saved) / static_cast<double>(r.raw_size);
    return r;
}

}  // namespace cpk
