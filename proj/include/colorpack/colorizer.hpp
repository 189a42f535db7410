#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "colorpack/adam.hpp"
#include "colorpack/image.hpp"
#include "colorpack/network.hpp"

namespace cpk {

struct TrainConfig {
    int epochs = 200;
    int batch_size = 8;
    int width = 256;  // fixed training size; multiples of 8
    int height = 256;
    std::uint64_t seed = 0;
    AdamConfig adam;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const TrainConfig& config);

struct TrainResult {
    NetworkModel model;
    std::vector<double> loss_history;  // one entry per optimizer step
};

/// Called after every optimizer step with (step index, epoch, loss).
using TrainProgress = std::function<void(std::size_t, int, double)>;

/// Keyframes are resized to the fixed size, converted to normalized Lab and
/// fitted with MSE on (a,b) using Adam. Batches are reshuffled every epoch
/// from the config seed, so a fixed seed reproduces the loss history exactly.
TrainResult train(NetworkModel model, std::span<const FrameRGB> keyframes, const TrainConfig& config,
                  const TrainProgress& progress = {});

/// Normalized L input (1 channel) and a,b target (2 channels) for one frame.
struct LabTensors {
    Tensor4<float> L;
    Tensor4<float> ab;
};
LabTensors to_training_tensors(const FrameRGB& frame);

/// Colorize one grayscale plane: the L samples are passed through and the
/// network supplies a,b. Planes whose size is not a multiple of the network's
/// spatial multiple are reflect-padded and the prediction cropped back.
FrameRGB predict(const NetworkModel& model, const GrayPlane& gray);

/// Raw network a,b (denormalized, before gamut fitting) for a grayscale plane.
FrameLab predict_lab(const NetworkModel& model, const GrayPlane& gray);

}  // namespace cpk
