#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "colorpack/codec.hpp"

namespace cpk {

double psnr_from_mse(double mse) {
    if (mse <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

FrameMetrics evaluate_frame(const FrameRGB& decoded, const FrameRGB& original) {
    validate(decoded);
    validate(original);
    if (decoded.width != original.width || decoded.height != original.height) {
        throw std::invalid_argument("evaluate: frame sizes differ");
    }
    if (original.pixel_count() == 0) throw std::invalid_argument("evaluate: empty frame");

    FrameMetrics m;
    double sum = 0.0;
    for (std::size_t i = 0; i < original.data.size(); ++i) {
        const double d = static_cast<double>(decoded.data[i]) - static_cast<double>(original.data[i]);
        sum += d * d;
    }
    m.mse_rgb = sum / static_cast<double>(original.data.size());
    m.psnr = psnr_from_mse(m.mse_rgb);

    const NormalizedLab x = normalize_lab(rgb_to_lab(decoded));
    const NormalizedLab y = normalize_lab(rgb_to_lab(original));
    double ab = 0.0;
    for (std::size_t i = 0; i < x.pixel_count(); ++i) {
        const double da = x.a[i] - y.a[i];
        const double db = x.b[i] - y.b[i];
        ab += da * da + db * db;
    }
    m.ab_mse = ab / (2.0 * static_cast<double>(x.pixel_count()));
    return m;
}

VideoMetrics evaluate(std::span<const FrameRGB> decoded, std::span<const FrameRGB> original) {
    if (decoded.size() != original.size()) {
        throw std::invalid_argument("evaluate: " + std::to_string(decoded.size()) + " decoded frames vs " +
                                    std::to_string(original.size()) + " original");
    }
    if (decoded.empty()) throw std::invalid_argument("evaluate: no frames");

    VideoMetrics v;
    double psnr_sum = 0.0;
    double mse_sum = 0.0;
    double ab_sum = 0.0;
    for (std::size_t i = 0; i < decoded.size(); ++i) {
        v.frames.push_back(evaluate_frame(decoded[i], original[i]));
        psnr_sum += v.frames.back().psnr;
        mse_sum += v.frames.back().mse_rgb;
        ab_sum += v.frames.back().ab_mse;
    }
    const double n = static_cast<double>(decoded.size());
    v.mean_psnr = psnr_sum / n;
    v.pooled_psnr = psnr_from_mse(mse_sum / n);
    v.mean_ab_mse = ab_sum / n;
    return v;
}

}  // namespace cpk
