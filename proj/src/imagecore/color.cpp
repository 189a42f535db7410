#include "colorpack/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace cpk {

namespace {

// sRGB primaries, D65. The white point is the row sums of the forward matrix
// so that (255,255,255) lands exactly on a = b = 0.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kXyzToRgb[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};
constexpr double kWhiteX = kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2];
constexpr double kWhiteY = kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2];
constexpr double kWhiteZ = kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2];

constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

double srgb_decode(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double srgb_encode(double c) {
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
    return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f) {
    const double f3 = f * f * f;
    return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

const std::array<double, 256>& linear_lut() {
    static const std::array<double, 256> lut = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i) t[i] = srgb_decode(i / 255.0);
        return t;
    }();
    return lut;
}

Lab linear_to_lab(double r, double g, double b) {
    const double x = kRgbToXyz[0][0] * r + kRgbToXyz[0][1] * g + kRgbToXyz[0][2] * b;
    const double y = kRgbToXyz[1][0] * r + kRgbToXyz[1][1] * g + kRgbToXyz[1][2] * b;
    const double z = kRgbToXyz[2][0] * r + kRgbToXyz[2][1] * g + kRgbToXyz[2][2] * b;
    const double fx = lab_f(x / kWhiteX);
    const double fy = lab_f(y / kWhiteY);
    const double fz = lab_f(z / kWhiteZ);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::uint8_t to_byte(double c) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(c * 255.0), 0L, 255L));
}

bool in_unit_cube(double r, double g, double b, double slack) {
    return r >= -slack && r <= 1.0 + slack && g >= -slack && g <= 1.0 + slack && b >= -slack &&
           b <= 1.0 + slack;
}

}  // namespace

Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const auto& lut = linear_lut();
    return linear_to_lab(lut[r], lut[g], lut[b]);
}

Lab srgb_unit_to_lab(double r, double g, double b) {
    return linear_to_lab(srgb_decode(r), srgb_decode(g), srgb_decode(b));
}

void lab_to_srgb_unclamped(const Lab& lab, double& r, double& g, double& b) {
    const double fy = (lab.L + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    const double x = kWhiteX * lab_f_inv(fx);
    const double y = kWhiteY * (lab.L > kKappa * kEpsilon ? fy * fy * fy : lab.L / kKappa);
    const double z = kWhiteZ * lab_f_inv(fz);
    const double lr = kXyzToRgb[0][0] * x + kXyzToRgb[0][1] * y + kXyzToRgb[0][2] * z;
    const double lg = kXyzToRgb[1][0] * x + kXyzToRgb[1][1] * y + kXyzToRgb[1][2] * z;
    const double lb = kXyzToRgb[2][0] * x + kXyzToRgb[2][1] * y + kXyzToRgb[2][2] * z;
    r = srgb_encode(lr);
    g = srgb_encode(lg);
    b = srgb_encode(lb);
}

void lab_to_srgb(const Lab& lab, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
    double fr = 0.0, fg = 0.0, fb = 0.0;
    lab_to_srgb_unclamped(lab, fr, fg, fb);
    r = to_byte(fr);
    g = to_byte(fg);
    b = to_byte(fb);
}

Lab fit_to_gamut(const Lab& lab) {
    // Half an 8-bit step of slack: anything inside rounds into [0,255] anyway.
    constexpr double kSlack = 0.5 / 255.0;
    double r = 0.0, g = 0.0, b = 0.0;
    lab_to_srgb_unclamped(lab, r, g, b);
    if (in_unit_cube(r, g, b, kSlack)) return lab;

    const double L = std::clamp(lab.L, 0.0, 100.0);
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        lab_to_srgb_unclamped({L, lab.a * mid, lab.b * mid}, r, g, b);
        if (in_unit_cube(r, g, b, kSlack)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {L, lab.a * lo, lab.b * lo};
}

FrameLab rgb_to_lab(const FrameRGB& frame) {
    validate(frame);
    FrameLab out(frame.width, frame.height);
    const std::size_t n = frame.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = frame.data.data() + 3 * i;
        const Lab lab = srgb_to_lab(p[0], p[1], p[2]);
        out.L[i] = static_cast<float>(std::clamp(lab.L, 0.0, 100.0));
        out.a[i] = static_cast<float>(std::clamp(lab.a, -128.0, 127.0));
        out.b[i] = static_cast<float>(std::clamp(lab.b, -128.0, 127.0));
    }
    return out;
}

FrameRGB lab_to_rgb(const FrameLab& frame) {
    const std::size_t n = frame.pixel_count();
    if (frame.L.size() != n || frame.a.size() != n || frame.b.size() != n) {
        throw std::invalid_argument("lab_to_rgb: plane size does not match dimensions");
    }
    FrameRGB out(frame.width, frame.height);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t* p = out.data.data() + 3 * i;
        lab_to_srgb({frame.L[i], frame.a[i], frame.b[i]}, p[0], p[1], p[2]);
    }
    return out;
}

float normalize_L(float L) { return L / 50.0f - 1.0f; }
float denormalize_L(float Ln) { return (Ln + 1.0f) * 50.0f; }
float normalize_ab(float v) { return v / 128.0f; }
float denormalize_ab(float vn) { return vn * 128.0f; }

NormalizedLab normalize_lab(const FrameLab& frame) {
    NormalizedLab out(frame.width, frame.height);
    std::transform(frame.L.begin(), frame.L.end(), out.L.begin(), normalize_L);
    std::transform(frame.a.begin(), frame.a.end(), out.a.begin(), normalize_ab);
    std::transform(frame.b.begin(), frame.b.end(), out.b.begin(), normalize_ab);
    return out;
}

FrameLab denormalize_lab(const NormalizedLab& frame) {
    FrameLab out(frame.width, frame.height);
    auto L = [](float v) { return std::clamp(denormalize_L(v), 0.0f, 100.0f); };
    auto ab = [](float v) { return std::clamp(denormalize_ab(v), -128.0f, 127.0f); };
    std::transform(frame.L.begin(), frame.L.end(), out.L.begin(), L);
    std::transform(frame.a.begin(), frame.a.end(), out.a.begin(), ab);
    std::transform(frame.b.begin(), frame.b.end(), out.b.begin(), ab);
    return out;
}

std::uint8_t quantize_L(double L) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(L * 255.0 / 100.0), 0L, 255L));
}

double dequantize_L(std::uint8_t q) { return q * 100.0 / 255.0; }

GrayPlane extract_grayscale(const FrameRGB& frame) {
    validate(frame);
    GrayPlane out(frame.width, frame.height);
    const std::size_t n = frame.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = frame.data.data() + 3 * i;
        out.data[i] = quantize_L(srgb_to_lab(p[0], p[1], p[2]).L);
    }
    return out;
}

}  // namespace cpk
