#include "colorpack/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cpk {

std::vector<LayerSpec> colorizer_architecture() {
    using K = LayerSpec::Kind;
    const auto conv = [](int out, int stride, Activation act = Activation::Relu) {
        return LayerSpec{K::Conv, out, stride, act};
    };
    const LayerSpec up{K::Upsample, 0, 1, Activation::None};
    return {
        conv(64, 1),  conv(64, 2),  conv(128, 1), conv(128, 2), conv(256, 1),
        conv(256, 2), conv(512, 1), conv(256, 1), conv(128, 1), up,
        conv(64, 1),  up,           conv(32, 1),  conv(2, 1, Activation::Tanh), up,
    };
}

template <typename T>
Network<T>::Network(std::span<const LayerSpec> manifest, int input_channels) {
    int channels = input_channels;
    for (const auto& spec : manifest) {
        if (spec.kind == LayerSpec::Kind::Upsample) {
            layers_.emplace_back(UpsampleLayer{});
            continue;
        }
        if (spec.out_channels < 1 || (spec.stride != 1 && spec.stride != 2)) {
            throw std::invalid_argument("Network: invalid conv layer in manifest");
        }
        layers_.emplace_back(ConvLayer<T>(spec.out_channels, channels, spec.stride, spec.activation));
        channels = spec.out_channels;
    }
}

template <typename T>
int Network<T>::input_channels() const {
    for (const auto& layer : layers_) {
        if (const auto* conv = std::get_if<ConvLayer<T>>(&layer)) return conv->in_channels;
    }
    return 0;
}

template <typename T>
int Network<T>::output_channels() const {
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
        if (const auto* conv = std::get_if<ConvLayer<T>>(&*it)) return conv->out_channels;
    }
    return 0;
}

template <typename T>
std::size_t Network<T>::parameter_count() const {
    std::size_t total = 0;
    for (const auto& layer : layers_) {
        if (const auto* conv = std::get_if<ConvLayer<T>>(&layer)) total += conv->parameter_count();
    }
    return total;
}

template <typename T>
int Network<T>::spatial_multiple() const {
    int multiple = 1;
    for (const auto& layer : layers_) {
        if (const auto* conv = std::get_if<ConvLayer<T>>(&layer); conv && conv->stride == 2) multiple *= 2;
    }
    return multiple;
}

template <typename T>
std::vector<LayerSpec> Network<T>::manifest() const {
    std::vector<LayerSpec> out;
    for (const auto& layer : layers_) {
        if (const auto* conv = std::get_if<ConvLayer<T>>(&layer)) {
            out.push_back({LayerSpec::Kind::Conv, conv->out_channels, conv->stride, conv->activation});
        } else {
            out.push_back({LayerSpec::Kind::Upsample, 0, 1, Activation::None});
        }
    }
    return out;
}

template <typename T>
void Network<T>::check_input(const Tensor4<T>& input) const {
    if (input.channels() != input_channels()) {
        throw std::invalid_argument("Network: expected " + std::to_string(input_channels()) + " input channel(s), got " +
                                    std::to_string(input.channels()));
    }
    const int multiple = spatial_multiple();
    if (input.height() < 1 || input.width() < 1 || input.height() % multiple != 0 || input.width() % multiple != 0) {
        throw std::invalid_argument("Network: spatial size " + std::to_string(input.height()) + "x" +
                                    std::to_string(input.width()) + " is not a positive multiple of " +
                                    std::to_string(multiple));
    }
}

template <typename T>
Tensor4<T> Network<T>::forward(const Tensor4<T>& input) const {
    check_input(input);
    Tensor4<T> x = input;
    for (const auto& layer : layers_) {
        if (const auto* conv = std::get_if<ConvLayer<T>>(&layer)) {
            x = activation_forward(conv->activation, conv2d_forward(x, *conv));
        } else {
            x = upsample2x_forward(x);
        }
    }
    return x;
}

template <typename T>
typename Network<T>::Trace Network<T>::forward_trace(const Tensor4<T>& input) const {
    check_input(input);
    Trace trace;
    trace.values.reserve(layers_.size() + 1);
    trace.values.push_back(input);
    for (const auto& layer : layers_) {
        const Tensor4<T>& x = trace.values.back();
        if (const auto* conv = std::get_if<ConvLayer<T>>(&layer)) {
            trace.values.push_back(activation_forward(conv->activation, conv2d_forward(x, *conv)));
        } else {
            trace.values.push_back(upsample2x_forward(x));
        }
    }
    return trace;
}

template <typename T>
typename Network<T>::Gradients Network<T>::backward(const Trace& trace, const Tensor4<T>& grad_output) const {
    if (trace.values.size() != layers_.size() + 1) throw std::invalid_argument("Network::backward: trace mismatch");
    if (!grad_output.same_shape(trace.output())) {
        throw std::invalid_argument("Network::backward: gradient shape " + grad_output.shape_string() +
                                    " does not match output " + trace.output().shape_string());
    }

    std::size_t conv_count = 0;
    for (const auto& layer : layers_) conv_count += std::holds_alternative<ConvLayer<T>>(layer) ? 1 : 0;

    Gradients grads;
    grads.weights.resize(conv_count);
    grads.bias.resize(conv_count);

    Tensor4<T> grad = grad_output;
    std::size_t conv_index = conv_count;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        if (const auto* conv = std::get_if<ConvLayer<T>>(&layers_[i])) {
            const Tensor4<T> grad_pre = activation_backward(conv->activation, grad, trace.values[i + 1]);
            ConvGradients<T> g = conv2d_backward(grad_pre, trace.values[i], *conv);
            --conv_index;
            grads.weights[conv_index] = std::move(g.weights);
            grads.bias[conv_index] = std::move(g.bias);
            grad = std::move(g.input);
        } else {
            grad = upsample2x_backward(grad);
        }
    }
    grads.input = std::move(grad);
    return grads;
}

template <typename T>
std::vector<std::span<T>> Network<T>::parameters() {
    std::vector<std::span<T>> out;
    for (auto& layer : layers_) {
        if (auto* conv = std::get_if<ConvLayer<T>>(&layer)) {
            out.emplace_back(conv->weights);
            out.emplace_back(conv->bias);
        }
    }
    return out;
}

template <typename T>
std::vector<std::span<const T>> Network<T>::parameters() const {
    std::vector<std::span<const T>> out;
    for (const auto& layer : layers_) {
        if (const auto* conv = std::get_if<ConvLayer<T>>(&layer)) {
            out.emplace_back(conv->weights);
            out.emplace_back(conv->bias);
        }
    }
    return out;
}

template <typename T>
void he_uniform_init(Network<T>& network, std::uint64_t seed) {
    UniformSource rng(seed);
    for (auto& layer : network.layers()) {
        auto* conv = std::get_if<ConvLayer<T>>(&layer);
        if (!conv) continue;
        const double fan_in = static_cast<double>(conv->in_channels) * ConvLayer<T>::kKernel * ConvLayer<T>::kKernel;
        const double bound = std::sqrt(6.0 / fan_in);
        for (T& w : conv->weights) w = static_cast<T>((2.0 * rng.next() - 1.0) * bound);
        std::fill(conv->bias.begin(), conv->bias.end(), T(0));
    }
}

NetworkModel init_model(std::uint64_t seed) {
    const auto manifest = colorizer_architecture();
    NetworkModel model(manifest, 1);
    he_uniform_init(model, seed);
    return model;
}

template class Network<float>;
template class Network<double>;
template void he_uniform_init<float>(Network<float>&, std::uint64_t);
template void he_uniform_init<double>(Network<double>&, std::uint64_t);

}  // namespace cpk
