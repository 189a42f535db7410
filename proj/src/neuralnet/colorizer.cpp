#include <algorithm>
#include <stdexcept>

#include "colorpack/colorizer.hpp"

namespace cpk {

namespace {

// Mirror index without repeating the edge sample; folds repeatedly for pads
// longer than the plane.
int reflect(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

int round_up(int v, int multiple) { return (v + multiple - 1) / multiple * multiple; }

}  // namespace

FrameLab predict_lab(const NetworkModel& model, const GrayPlane& gray) {
    if (gray.width < 1 || gray.height < 1 || gray.data.size() != gray.pixel_count()) {
        throw std::invalid_argument("predict: invalid grayscale plane");
    }
    const int multiple = model.spatial_multiple();
    const int pw = round_up(gray.width, multiple);
    const int ph = round_up(gray.height, multiple);
    const int left = (pw - gray.width) / 2;
    const int top = (ph - gray.height) / 2;

    Tensor4<float> input(1, 1, ph, pw);
    for (int y = 0; y < ph; ++y) {
        const int sy = reflect(y - top, gray.height);
        for (int x = 0; x < pw; ++x) {
            const int sx = reflect(x - left, gray.width);
            const std::uint8_t q = gray.data[static_cast<std::size_t>(sy) * gray.width + sx];
            input.at(0, 0, y, x) = normalize_L(static_cast<float>(dequantize_L(q)));
        }
    }

    const Tensor4<float> ab = model.forward(input);

    FrameLab lab(gray.width, gray.height);
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * gray.width + x;
            lab.L[i] = static_cast<float>(dequantize_L(gray.data[i]));
            lab.a[i] = std::clamp(denormalize_ab(ab.at(0, 0, y + top, x + left)), -128.0f, 127.0f);
            lab.b[i] = std::clamp(denormalize_ab(ab.at(0, 1, y + top, x + left)), -128.0f, 127.0f);
        }
    }
    return lab;
}

FrameRGB predict(const NetworkModel& model, const GrayPlane& gray) {
    const FrameLab lab = predict_lab(model, gray);
    FrameRGB out(gray.width, gray.height);
    for (std::size_t i = 0; i < lab.pixel_count(); ++i) {
        const Lab fitted = fit_to_gamut({lab.L[i], lab.a[i], lab.b[i]});
        std::uint8_t* p = out.data.data() + 3 * i;
        lab_to_srgb(fitted, p[0], p[1], p[2]);
    }
    return out;
}

}  // namespace cpk
