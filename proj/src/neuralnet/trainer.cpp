#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "colorpack/colorizer.hpp"

namespace cpk {

void validate(const TrainConfig& config) {
    if (config.epochs < 1) throw std::invalid_argument("epochs must be positive");
    if (config.batch_size < 1) throw std::invalid_argument("batch size must be positive");
    if (config.width < 8 || config.height < 8 || config.width % 8 != 0 || config.height % 8 != 0) {
        throw std::invalid_argument("training size " + std::to_string(config.width) + "x" +
                                    std::to_string(config.height) + " must be a positive multiple of 8");
    }
    if (!(config.adam.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
}

LabTensors to_training_tensors(const FrameRGB& frame) {
    const NormalizedLab lab = normalize_lab(rgb_to_lab(frame));
    LabTensors t{Tensor4<float>(1, 1, frame.height, frame.width), Tensor4<float>(1, 2, frame.height, frame.width)};
    std::copy(lab.L.begin(), lab.L.end(), t.L.data.begin());
    std::copy(lab.a.begin(), lab.a.end(), t.ab.data.begin());
    std::copy(lab.b.begin(), lab.b.end(), t.ab.data.begin() + static_cast<std::ptrdiff_t>(lab.pixel_count()));
    return t;
}

TrainResult train(NetworkModel model, std::span<const FrameRGB> keyframes, const TrainConfig& config,
                  const TrainProgress& progress) {
    validate(config);
    if (keyframes.empty()) throw std::invalid_argument("train: no keyframes");
    if (model.input_channels() != 1 || model.output_channels() != 2) {
        throw std::invalid_argument("train: model must map 1 channel to 2");
    }

    std::vector<LabTensors> samples;
    samples.reserve(keyframes.size());
    for (const auto& frame : keyframes) samples.push_back(to_training_tensors(resize_frame(frame, config.width, config.height)));

    const std::size_t plane = static_cast<std::size_t>(config.width) * config.height;
    AdamState<float> adam(std::span<const std::span<float>>(model.parameters()), config.adam);
    UniformSource rng(config.seed);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        deterministic_shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t count = std::min<std::size_t>(config.batch_size, order.size() - start);
            Tensor4<float> input(static_cast<int>(count), 1, config.height, config.width);
            Tensor4<float> target(static_cast<int>(count), 2, config.height, config.width);
            for (std::size_t k = 0; k < count; ++k) {
                const LabTensors& s = samples[order[start + k]];
                std::copy(s.L.data.begin(), s.L.data.end(), input.data.begin() + static_cast<std::ptrdiff_t>(k * plane));
                std::copy(s.ab.data.begin(), s.ab.data.end(),
                          target.data.begin() + static_cast<std::ptrdiff_t>(2 * k * plane));
            }

            const auto trace = model.forward_trace(input);
            const auto loss = mse_loss(trace.output(), target);
            if (!std::isfinite(loss.loss)) throw std::runtime_error("train: loss diverged to a non-finite value");
            const auto grads = model.backward(trace, loss.gradient);

            std::vector<std::span<const float>> grad_views;
            for (std::size_t i = 0; i < grads.weights.size(); ++i) {
                grad_views.emplace_back(grads.weights[i]);
                grad_views.emplace_back(grads.bias[i]);
            }
            const auto params = model.parameters();
            adam_step<float>(params, grad_views, adam);

            result.loss_history.push_back(loss.loss);
            if (progress) progress(result.loss_history.size() - 1, epoch, loss.loss);
        }
    }
    result.model = std::move(model);
    return result;
}

}  // namespace cpk
