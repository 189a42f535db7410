#pragma once

#include <cstdint>
#include <vector>

#include "colorpack/tensor.hpp"

namespace cpk {

enum class Activation : std::uint8_t { None = 0, Relu = 1, Tanh = 2 };

/// 3x3 convolution with one pixel of zero padding on every side, so the
/// output is ceil(n / stride) along each spatial axis.
/// Weights are (out_ch, in_ch, 3, 3) row-major.
template <typename T>
struct ConvLayer {
    static constexpr int kKernel = 3;

    int out_channels = 0;
    int in_channels = 0;
    int stride = 1;
    Activation activation = Activation::Relu;
    AlignedVector<T> weights;
    AlignedVector<T> bias;

    ConvLayer() = default;
    ConvLayer(int out_ch, int in_ch, int stride_, Activation act)
        : out_channels(out_ch),
          in_channels(in_ch),
          stride(stride_),
          activation(act),
          weights(static_cast<std::size_t>(out_ch) * in_ch * kKernel * kKernel, T(0)),
          bias(out_ch, T(0)) {}

    std::size_t parameter_count() const { return weights.size() + bias.size(); }
    int output_extent(int in) const { return (in - 1) / stride + 1; }

    bool operator==(const ConvLayer&) const = default;
};

template <typename T>
struct ConvGradients {
    Tensor4<T> input;
    AlignedVector<T> weights;
    AlignedVector<T> bias;
};

/// Cross-correlation plus bias; the layer's activation is not applied here.
template <typename T>
Tensor4<T> conv2d_forward(const Tensor4<T>& input, const ConvLayer<T>& layer);

template <typename T>
ConvGradients<T> conv2d_backward(const Tensor4<T>& grad_output, const Tensor4<T>& input, const ConvLayer<T>& layer);

/// Nearest-neighbour 2x: every sample becomes a 2x2 block.
template <typename T>
Tensor4<T> upsample2x_forward(const Tensor4<T>& input);

/// Adjoint of replication: each input sample receives the sum of its block.
template <typename T>
Tensor4<T> upsample2x_backward(const Tensor4<T>& grad_output);

template <typename T>
Tensor4<T> activation_forward(Activation kind, Tensor4<T> x);

/// Derivative expressed through the forward output: relu' = [y > 0], tanh' = 1 - y^2.
template <typename T>
Tensor4<T> activation_backward(Activation kind, const Tensor4<T>& grad_output, const Tensor4<T>& output);

template <typename T>
struct LossResult {
    T loss = T(0);
    Tensor4<T> gradient;
};

/// Mean of squared differences over every element; gradient 2(pred - target)/count.
template <typename T>
LossResult<T> mse_loss(const Tensor4<T>& prediction, const Tensor4<T>& target);

}  // namespace cpk
