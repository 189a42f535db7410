#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cpk {

/// 8-bit sRGB frame, interleaved R,G,B per pixel, rows top to bottom.
/// This is the same byte order as a P6 PPM body and a raw RGB24 frame.
struct FrameRGB {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    FrameRGB() = default;
    FrameRGB(int w, int h);
    FrameRGB(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    std::uint8_t* pixel(int x, int y) { return data.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }

    bool operator==(const FrameRGB&) const = default;
};

/// Planar CIELab frame. L in [0,100], a and b in [-128,127].
struct FrameLab {
    int width = 0;
    int height = 0;
    std::vector<float> L;
    std::vector<float> a;
    std::vector<float> b;

    FrameLab() = default;
    FrameLab(int w, int h);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

/// CIELab planes mapped into [-1,1]: L' = L/50 - 1, a' = a/128, b' = b/128.
struct NormalizedLab {
    int width = 0;
    int height = 0;
    std::vector<float> L;
    std::vector<float> a;
    std::vector<float> b;

    NormalizedLab() = default;
    NormalizedLab(int w, int h);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

/// One 8-bit sample per pixel holding round(L * 255 / 100).
struct GrayPlane {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    GrayPlane() = default;
    GrayPlane(int w, int h);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    bool operator==(const GrayPlane&) const = default;
};

struct Lab {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
};

// Per-pixel conversions. sRGB transfer function with D65 white.
Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
Lab srgb_unit_to_lab(double r, double g, double b);  // components in [0,1]
void lab_to_srgb_unclamped(const Lab& lab, double& r, double& g, double& b);  // gamma-encoded, may leave [0,1]
void lab_to_srgb(const Lab& lab, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b);

/// Scales (a,b) toward zero at fixed L until the color is inside the sRGB
/// cube, so that 8-bit clamping no longer moves the lightness.
Lab fit_to_gamut(const Lab& lab);

FrameLab rgb_to_lab(const FrameRGB& frame);
FrameRGB lab_to_rgb(const FrameLab& frame);

NormalizedLab normalize_lab(const FrameLab& frame);
FrameLab denormalize_lab(const NormalizedLab& frame);

float normalize_L(float L);
float denormalize_L(float Ln);
float normalize_ab(float v);
float denormalize_ab(float vn);

std::uint8_t quantize_L(double L);
double dequantize_L(std::uint8_t q);

GrayPlane extract_grayscale(const FrameRGB& frame);

/// Bilinear resample using pixel-center alignment. Returns the input unchanged
/// when the size already matches. Throws std::invalid_argument on a zero target.
FrameRGB resize_frame(const FrameRGB& frame, int target_w, int target_h);

/// Throws std::invalid_argument unless data.size() == width * height * 3.
void validate(const FrameRGB& frame);

}  // namespace cpk
