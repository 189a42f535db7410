#include "colorpack/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

namespace cpk {

namespace {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatrixMap = Eigen::Map<RowMatrix<T>>;
template <typename T>
using ConstMatrixMap = Eigen::Map<const RowMatrix<T>>;

constexpr int kPad = 1;
constexpr int kK = ConvLayer<float>::kKernel;

void check_conv_input(int channels, int height, int width, int in_channels) {
    if (channels != in_channels) {
        throw std::invalid_argument("conv2d: input has " + std::to_string(channels) + " channels, layer expects " +
                                    std::to_string(in_channels));
    }
    if (height < 1 || width < 1) throw std::invalid_argument("conv2d: empty spatial extent");
}

// Column matrix of shape (in_ch*9, out_h*out_w) for one image.
template <typename T>
void im2col(const T* image, int channels, int height, int width, int stride, int out_h, int out_w, T* col) {
    const std::size_t cols = static_cast<std::size_t>(out_h) * out_w;
    for (int c = 0; c < channels; ++c) {
        const T* plane = image + static_cast<std::size_t>(c) * height * width;
        for (int ky = 0; ky < kK; ++ky) {
            for (int kx = 0; kx < kK; ++kx) {
                T* row = col + (static_cast<std::size_t>(c) * kK * kK + ky * kK + kx) * cols;
                for (int oy = 0; oy < out_h; ++oy) {
                    const int iy = oy * stride + ky - kPad;
                    T* dst = row + static_cast<std::size_t>(oy) * out_w;
                    if (iy < 0 || iy >= height) {
                        std::fill(dst, dst + out_w, T(0));
                        continue;
                    }
                    const T* src = plane + static_cast<std::size_t>(iy) * width;
                    for (int ox = 0; ox < out_w; ++ox) {
                        const int ix = ox * stride + kx - kPad;
                        dst[ox] = (ix >= 0 && ix < width) ? src[ix] : T(0);
                    }
                }
            }
        }
    }
}

template <typename T>
void col2im(const T* col, int channels, int height, int width, int stride, int out_h, int out_w, T* image) {
    const std::size_t cols = static_cast<std::size_t>(out_h) * out_w;
    for (int c = 0; c < channels; ++c) {
        T* plane = image + static_cast<std::size_t>(c) * height * width;
        for (int ky = 0; ky < kK; ++ky) {
            for (int kx = 0; kx < kK; ++kx) {
                const T* row = col + (static_cast<std::size_t>(c) * kK * kK + ky * kK + kx) * cols;
                for (int oy = 0; oy < out_h; ++oy) {
                    const int iy = oy * stride + ky - kPad;
                    if (iy < 0 || iy >= height) continue;
                    const T* src = row + static_cast<std::size_t>(oy) * out_w;
                    T* dst = plane + static_cast<std::size_t>(iy) * width;
                    for (int ox = 0; ox < out_w; ++ox) {
                        const int ix = ox * stride + kx - kPad;
                        if (ix >= 0 && ix < width) dst[ix] += src[ox];
                    }
                }
            }
        }
    }
}

}  // namespace

template <typename T>
Tensor4<T> conv2d_forward(const Tensor4<T>& input, const ConvLayer<T>& layer) {
    check_conv_input(input.channels(), input.height(), input.width(), layer.in_channels);
    if (layer.stride != 1 && layer.stride != 2) throw std::invalid_argument("conv2d: stride must be 1 or 2");

    const int out_h = layer.output_extent(input.height());
    const int out_w = layer.output_extent(input.width());
    const int k = layer.in_channels * kK * kK;
    const int p = out_h * out_w;

    Tensor4<T> output(input.batch(), layer.out_channels, out_h, out_w);
    AlignedVector<T> col(static_cast<std::size_t>(k) * p);
    const ConstMatrixMap<T> w(layer.weights.data(), layer.out_channels, k);
    const Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> bias(layer.bias.data(), layer.out_channels);

    for (int n = 0; n < input.batch(); ++n) {
        im2col(input.image(n).data(), input.channels(), input.height(), input.width(), layer.stride, out_h, out_w,
               col.data());
        MatrixMap<T> out(output.image(n).data(), layer.out_channels, p);
        out.noalias() = w * ConstMatrixMap<T>(col.data(), k, p);
        out.colwise() += bias;
    }
    return output;
}

template <typename T>
ConvGradients<T> conv2d_backward(const Tensor4<T>& grad_output, const Tensor4<T>& input, const ConvLayer<T>& layer) {
    check_conv_input(input.channels(), input.height(), input.width(), layer.in_channels);
    const int out_h = layer.output_extent(input.height());
    const int out_w = layer.output_extent(input.width());
    if (grad_output.batch() != input.batch() || grad_output.channels() != layer.out_channels ||
        grad_output.height() != out_h || grad_output.width() != out_w) {
        throw std::invalid_argument("conv2d_backward: gradient shape " + grad_output.shape_string() +
                                    " does not match forward output");
    }

    const int k = layer.in_channels * kK * kK;
    const int p = out_h * out_w;

    ConvGradients<T> grads;
    grads.input = Tensor4<T>(input.batch(), input.channels(), input.height(), input.width());
    grads.weights.assign(layer.weights.size(), T(0));
    grads.bias.assign(layer.bias.size(), T(0));

    AlignedVector<T> col(static_cast<std::size_t>(k) * p);
    AlignedVector<T> grad_col(static_cast<std::size_t>(k) * p);
    const ConstMatrixMap<T> w(layer.weights.data(), layer.out_channels, k);
    MatrixMap<T> grad_w(grads.weights.data(), layer.out_channels, k);
    Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>> grad_b(grads.bias.data(), layer.out_channels);

    for (int n = 0; n < input.batch(); ++n) {
        const ConstMatrixMap<T> g(grad_output.image(n).data(), layer.out_channels, p);
        im2col(input.image(n).data(), input.channels(), input.height(), input.width(), layer.stride, out_h, out_w,
               col.data());
        grad_w.noalias() += g * ConstMatrixMap<T>(col.data(), k, p).transpose();
        grad_b += g.rowwise().sum();

        MatrixMap<T> gc(grad_col.data(), k, p);
        gc.noalias() = w.transpose() * g;
        col2im(grad_col.data(), input.channels(), input.height(), input.width(), layer.stride, out_h, out_w,
               grads.input.image(n).data());
    }
    return grads;
}

template <typename T>
Tensor4<T> upsample2x_forward(const Tensor4<T>& input) {
    const int h = input.height();
    const int w = input.width();
    Tensor4<T> output(input.batch(), input.channels(), 2 * h, 2 * w);
    const std::size_t planes = static_cast<std::size_t>(input.batch()) * input.channels();
    for (std::size_t pl = 0; pl < planes; ++pl) {
        const T* src = input.data.data() + pl * h * w;
        T* dst = output.data.data() + pl * 4 * h * w;
        for (int y = 0; y < h; ++y) {
            T* row0 = dst + static_cast<std::size_t>(2 * y) * 2 * w;
            T* row1 = row0 + 2 * w;
            for (int x = 0; x < w; ++x) {
                const T v = src[static_cast<std::size_t>(y) * w + x];
                row0[2 * x] = row0[2 * x + 1] = v;
                row1[2 * x] = row1[2 * x + 1] = v;
            }
        }
    }
    return output;
}

template <typename T>
Tensor4<T> upsample2x_backward(const Tensor4<T>& grad_output) {
    if (grad_output.height() % 2 != 0 || grad_output.width() % 2 != 0) {
        throw std::invalid_argument("upsample2x_backward: gradient extent must be even");
    }
    const int h = grad_output.height() / 2;
    const int w = grad_output.width() / 2;
    Tensor4<T> grad_input(grad_output.batch(), grad_output.channels(), h, w);
    const std::size_t planes = static_cast<std::size_t>(grad_output.batch()) * grad_output.channels();
    for (std::size_t pl = 0; pl < planes; ++pl) {
        const T* src = grad_output.data.data() + pl * 4 * h * w;
        T* dst = grad_input.data.data() + pl * h * w;
        for (int y = 0; y < h; ++y) {
            const T* row0 = src + static_cast<std::size_t>(2 * y) * 2 * w;
            const T* row1 = row0 + 2 * w;
            for (int x = 0; x < w; ++x) {
                dst[static_cast<std::size_t>(y) * w + x] =
                    row0[2 * x] + row0[2 * x + 1] + row1[2 * x] + row1[2 * x + 1];
            }
        }
    }
    return grad_input;
}

template <typename T>
Tensor4<T> activation_forward(Activation kind, Tensor4<T> x) {
    switch (kind) {
        case Activation::None:
            break;
        case Activation::Relu:
            for (T& v : x.data) v = v > T(0) ? v : T(0);
            break;
        case Activation::Tanh:
            for (T& v : x.data) v = std::tanh(v);
            break;
    }
    return x;
}

template <typename T>
Tensor4<T> activation_backward(Activation kind, const Tensor4<T>& grad_output, const Tensor4<T>& output) {
    if (!grad_output.same_shape(output)) throw std::invalid_argument("activation_backward: shape mismatch");
    Tensor4<T> grad = grad_output;
    switch (kind) {
        case Activation::None:
            break;
        case Activation::Relu:
            for (std::size_t i = 0; i < grad.size(); ++i) {
                if (!(output.data[i] > T(0))) grad.data[i] = T(0);
            }
            break;
        case Activation::Tanh:
            for (std::size_t i = 0; i < grad.size(); ++i) {
                grad.data[i] *= T(1) - output.data[i] * output.data[i];
            }
            break;
    }
    return grad;
}

template <typename T>
LossResult<T> mse_loss(const Tensor4<T>& prediction, const Tensor4<T>& target) {
    if (!prediction.same_shape(target)) {
        throw std::invalid_argument("mse_loss: shape " + prediction.shape_string() + " vs " + target.shape_string());
    }
    if (prediction.size() == 0) throw std::invalid_argument("mse_loss: empty tensors");
    const T count = static_cast<T>(prediction.size());
    LossResult<T> result;
    result.gradient = Tensor4<T>(prediction.batch(), prediction.channels(), prediction.height(), prediction.width());
    // Accumulate in double so float training reports a stable loss.
    double sum = 0.0;
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        const T diff = prediction.data[i] - target.data[i];
        sum += static_cast<double>(diff) * static_cast<double>(diff);
        result.gradient.data[i] = T(2) * diff / count;
    }
    result.loss = static_cast<T>(sum / static_cast<double>(prediction.size()));
    return result;
}

#define CPK_INSTANTIATE_LAYERS(T)                                                                        \
    template Tensor4<T> conv2d_forward<T>(const Tensor4<T>&, const ConvLayer<T>&);                     \
    template ConvGradients<T> conv2d_backward<T>(const Tensor4<T>&, const Tensor4<T>&, const ConvLayer<T>&); \
    template Tensor4<T> upsample2x_forward<T>(const Tensor4<T>&);                                        \
    template Tensor4<T> upsample2x_backward<T>(const Tensor4<T>&);                                       \
    template Tensor4<T> activation_forward<T>(Activation, Tensor4<T>);                                   \
    template Tensor4<T> activation_backward<T>(Activation, const Tensor4<T>&, const Tensor4<T>&);        \
    template LossResult<T> mse_loss<T>(const Tensor4<T>&, const Tensor4<T>&);

CPK_INSTANTIATE_LAYERS(float)
CPK_INSTANTIATE_LAYERS(double)

#undef CPK_INSTANTIATE_LAYERS

}  // namespace cpk
