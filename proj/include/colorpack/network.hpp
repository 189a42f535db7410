#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "colorpack/layers.hpp"

namespace cpk {

struct UpsampleLayer {
    bool operator==(const UpsampleLayer&) const = default;
};

/// Entry of a layer manifest. Upsample entries ignore the other fields.
struct LayerSpec {
    enum class Kind : std::uint8_t { Conv = 0, Upsample = 1 };
    Kind kind = Kind::Conv;
    int out_channels = 0;
    int stride = 1;
    Activation activation = Activation::Relu;
};

/// The colorization network: 12 conv layers (3x3) and 3 nearest-neighbour
/// upsamplings. Stride 2 on conv 2, 4 and 6; ReLU everywhere except the last
/// conv, which is tanh so a,b predictions stay in (-1,1).
std::vector<LayerSpec> colorizer_architecture();

inline constexpr std::size_t kColorizerParameterCount = 3'892'194;

template <typename T>
class Network {
public:
    using Layer = std::variant<ConvLayer<T>, UpsampleLayer>;

    /// Activations recorded for backpropagation. values[0] is the input and
    /// values[i + 1] is the (post-activation) output of layer i.
    struct Trace {
        std::vector<Tensor4<T>> values;
        const Tensor4<T>& output() const { return values.back(); }
    };

    /// Weight/bias gradients, one entry per conv layer in order.
    struct Gradients {
        std::vector<AlignedVector<T>> weights;
        std::vector<AlignedVector<T>> bias;
        Tensor4<T> input;
    };

    Network() = default;
    /// Zero-initialised layers following the manifest.
    Network(std::span<const LayerSpec> manifest, int input_channels);

    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& layers() { return layers_; }

    int input_channels() const;
    int output_channels() const;
    std::size_t parameter_count() const;
    /// Spatial dims must be multiples of this for the output to match the input.
    int spatial_multiple() const;

    std::vector<LayerSpec> manifest() const;

    Tensor4<T> forward(const Tensor4<T>& input) const;
    Trace forward_trace(const Tensor4<T>& input) const;
    Gradients backward(const Trace& trace, const Tensor4<T>& grad_output) const;

    /// Flat views of every parameter buffer: weights then bias per conv layer.
    std::vector<std::span<T>> parameters();
    std::vector<std::span<const T>> parameters() const;

    bool operator==(const Network&) const = default;

private:
    void check_input(const Tensor4<T>& input) const;

    std::vector<Layer> layers_;
};

using NetworkModel = Network<float>;

/// He-uniform weights (bound sqrt(6 / (in_ch * 9))) and zero biases,
/// deterministic for a given seed.
template <typename T>
void he_uniform_init(Network<T>& network, std::uint64_t seed);

NetworkModel init_model(std::uint64_t seed);

/// Uniform draws whose values depend only on the seed. std::mt19937_64 is
/// fully specified; the std distributions are not, so they are avoided.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Index in [0, bound) for shuffling.
    std::size_t below(std::size_t bound) { return static_cast<std::size_t>(next() * static_cast<double>(bound)); }

private:
    std::mt19937_64 engine_;
};

/// Fisher-Yates with UniformSource.
template <typename It>
void deterministic_shuffle(It first, It last, UniformSource& rng) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) std::iter_swap(first + (i - 1), first + rng.below(i));
}

}  // namespace cpk
