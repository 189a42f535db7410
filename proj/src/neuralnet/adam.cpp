#include "colorpack/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cpk {

template <typename T>
AdamState<T>::AdamState(std::span<const std::span<T>> params, AdamConfig cfg) : config(cfg) {
    first_moment.reserve(params.size());
    second_moment.reserve(params.size());
    for (const auto& p : params) {
        first_moment.emplace_back(p.size(), T(0));
        second_moment.emplace_back(p.size(), T(0));
    }
}

template <typename T>
void adam_step(std::span<const std::span<T>> params, std::span<const std::span<const T>> grads, AdamState<T>& state) {
    if (params.size() != grads.size() || params.size() != state.first_moment.size() ||
        params.size() != state.second_moment.size()) {
        throw std::invalid_argument("adam_step: parameter, gradient and moment counts differ");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].size() != grads[i].size() || params[i].size() != state.first_moment[i].size() ||
            params[i].size() != state.second_moment[i].size()) {
            throw std::invalid_argument("adam_step: buffer " + std::to_string(i) + " has mismatched length");
        }
    }

    ++state.step;
    const auto& c = state.config;
    const double t = static_cast<double>(state.step);
    const T beta1 = static_cast<T>(c.beta1);
    const T beta2 = static_cast<T>(c.beta2);
    const T correction1 = static_cast<T>(1.0 - std::pow(c.beta1, t));
    const T correction2 = static_cast<T>(1.0 - std::pow(c.beta2, t));
    const T lr = static_cast<T>(c.learning_rate);
    const T eps = static_cast<T>(c.epsilon);

    for (std::size_t i = 0; i < params.size(); ++i) {
        T* p = params[i].data();
        const T* g = grads[i].data();
        T* m = state.first_moment[i].data();
        T* v = state.second_moment[i].data();
        for (std::size_t j = 0; j < params[i].size(); ++j) {
            m[j] = beta1 * m[j] + (T(1) - beta1) * g[j];
            v[j] = beta2 * v[j] + (T(1) - beta2) * g[j] * g[j];
            const T m_hat = m[j] / correction1;
            const T v_hat = v[j] / correction2;
            p[j] -= lr * m_hat / (std::sqrt(v_hat) + eps);
        }
    }
}

template struct AdamState<float>;
template struct AdamState<double>;
template void adam_step<float>(std::span<const std::span<float>>, std::span<const std::span<const float>>,
                               AdamState<float>&);
template void adam_step<double>(std::span<const std::span<double>>, std::span<const std::span<const double>>,
                                AdamState<double>&);

}  // namespace cpk
