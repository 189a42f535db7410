#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "colorpack/aligned.hpp"

namespace cpk {

/// Dense NCHW tensor.
template <typename T>
struct Tensor4 {
    std::array<int, 4> shape{};  // batch, channels, height, width
    AlignedVector<T> data;

    Tensor4() = default;
    Tensor4(int n, int c, int h, int w, T fill = T(0)) : shape{n, c, h, w}, data(count(n, c, h, w), fill) {}

    int batch() const { return shape[0]; }
    int channels() const { return shape[1]; }
    int height() const { return shape[2]; }
    int width() const { return shape[3]; }
    std::size_t size() const { return data.size(); }
    std::size_t plane_size() const { return static_cast<std::size_t>(shape[2]) * shape[3]; }
    std::size_t image_size() const { return plane_size() * shape[1]; }

    T& at(int n, int c, int y, int x) { return data[offset(n, c, y, x)]; }
    const T& at(int n, int c, int y, int x) const { return data[offset(n, c, y, x)]; }

    std::span<T> image(int n) { return {data.data() + n * image_size(), image_size()}; }
    std::span<const T> image(int n) const { return {data.data() + n * image_size(), image_size()}; }

    bool same_shape(const Tensor4& other) const { return shape == other.shape; }

    std::string shape_string() const {
        return "(" + std::to_string(shape[0]) + "," + std::to_string(shape[1]) + "," + std::to_string(shape[2]) + "," +
               std::to_string(shape[3]) + ")";
    }

private:
    static std::size_t count(int n, int c, int h, int w) {
        if (n < 0 || c < 0 || h < 0 || w < 0) throw std::invalid_argument("Tensor4: negative dimension");
        return static_cast<std::size_t>(n) * c * h * w;
    }
    std::size_t offset(int n, int c, int y, int x) const {
        return ((static_cast<std::size_t>(n) * shape[1] + c) * shape[2] + y) * shape[3] + x;
    }
};

}  // namespace cpk
