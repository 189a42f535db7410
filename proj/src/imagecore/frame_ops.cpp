#include "colorpack/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cpk {

namespace {

std::size_t checked_area(int w, int h) {
    if (w < 0 || h < 0) throw std::invalid_argument("negative frame dimension");
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
}

// Source coordinate for a destination sample with pixel-center alignment.
struct Tap {
    int i0;
    int i1;
    double w1;
};

Tap bilinear_tap(int dst, int dst_size, int src_size) {
    const double scale = static_cast<double>(src_size) / dst_size;
    double s = (dst + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_size - 1));
    const int i0 = static_cast<int>(std::floor(s));
    const int i1 = std::min(i0 + 1, src_size - 1);
    return {i0, i1, s - i0};
}

}  // namespace

FrameRGB::FrameRGB(int w, int h) : width(w), height(h), data(checked_area(w, h) * 3, 0) {}

FrameRGB::FrameRGB(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) : FrameRGB(w, h) {
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = r;
        data[i + 1] = g;
        data[i + 2] = b;
    }
}

FrameLab::FrameLab(int w, int h)
    : width(w), height(h), L(checked_area(w, h)), a(checked_area(w, h)), b(checked_area(w, h)) {}

NormalizedLab::NormalizedLab(int w, int h)
    : width(w), height(h), L(checked_area(w, h)), a(checked_area(w, h)), b(checked_area(w, h)) {}

GrayPlane::GrayPlane(int w, int h) : width(w), height(h), data(checked_area(w, h), 0) {}

void validate(const FrameRGB& frame) {
    if (frame.width < 0 || frame.height < 0 || frame.data.size() != checked_area(frame.width, frame.height) * 3) {
        throw std::invalid_argument("FrameRGB: data length " + std::to_string(frame.data.size()) +
                                    " does not match " + std::to_string(frame.width) + "x" +
                                    std::to_string(frame.height) + "x3");
    }
}

FrameRGB resize_frame(const FrameRGB& frame, int target_w, int target_h) {
    if (target_w < 1 || target_h < 1) {
        throw std::invalid_argument("resize_frame: target dimensions must be >= 1");
    }
    validate(frame);
    if (frame.width == target_w && frame.height == target_h) return frame;
    if (frame.width < 1 || frame.height < 1) {
        throw std::invalid_argument("resize_frame: cannot resize an empty frame");
    }

    std::vector<Tap> xs(target_w);
    for (int x = 0; x < target_w; ++x) xs[x] = bilinear_tap(x, target_w, frame.width);

    FrameRGB out(target_w, target_h);
    for (int y = 0; y < target_h; ++y) {
        const Tap ty = bilinear_tap(y, target_h, frame.height);
        for (int x = 0; x < target_w; ++x) {
            const Tap& tx = xs[x];
            const std::uint8_t* p00 = frame.pixel(tx.i0, ty.i0);
            const std::uint8_t* p01 = frame.pixel(tx.i1, ty.i0);
            const std::uint8_t* p10 = frame.pixel(tx.i0, ty.i1);
            const std::uint8_t* p11 = frame.pixel(tx.i1, ty.i1);
            std::uint8_t* q = out.pixel(x, y);
            for (int c = 0; c < 3; ++c) {
                const double top = p00[c] + tx.w1 * (p01[c] - p00[c]);
                const double bottom = p10[c] + tx.w1 * (p11[c] - p10[c]);
                const double v = top + ty.w1 * (bottom - top);
                q[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    }
    return out;
}

}  // namespace cpk
