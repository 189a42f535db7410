#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cpk {

struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Moment accumulators shaped like the parameter buffers they track.
template <typename T>
struct AdamState {
    AdamConfig config;
    std::int64_t step = 0;
    std::vector<std::vector<T>> first_moment;
    std::vector<std::vector<T>> second_moment;

    AdamState() = default;
    AdamState(std::span<const std::span<T>> params, AdamConfig cfg = {});
};

/// Bias-corrected Adam update in place; increments state.step.
/// Throws std::invalid_argument when buffer counts or lengths disagree.
template <typename T>
void adam_step(std::span<const std::span<T>> params, std::span<const std::span<const T>> grads, AdamState<T>& state);

}  // namespace cpk
