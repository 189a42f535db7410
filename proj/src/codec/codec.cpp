#include "colorpack/codec.hpp"

#include <limits>
#include <stdexcept>

#include "colorpack/model_io.hpp"

namespace cpk {

EncodeResult encode(std::span<const FrameRGB> frames, const EncodeOptions& options) {
    if (frames.empty()) throw std::invalid_argument("encode: no frames");
    validate(options.train);
    const int width = frames.front().width;
    const int height = frames.front().height;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        validate(frames[i]);
        if (frames[i].width != width || frames[i].height != height) {
            throw std::invalid_argument("encode: frame " + std::to_string(i) + " is " +
                                        std::to_string(frames[i].width) + "x" + std::to_string(frames[i].height) +
                                        ", expected " + std::to_string(width) + "x" + std::to_string(height));
        }
    }
    if (frames.size() > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("encode: too many frames");

    EncodeResult result;
    result.keyframes = extract_keyframes(frames, options.keyframes);

    std::vector<FrameRGB> keyframes;
    keyframes.reserve(result.keyframes.keyframes.indices.size());
    for (std::size_t index : result.keyframes.keyframes.indices) keyframes.push_back(frames[index]);

    TrainResult trained = train(init_model(options.train.seed), keyframes, options.train, options.progress);
    result.loss_history = std::move(trained.loss_history);

    Package& p = result.package;
    p.meta = {width, height, static_cast<std::uint32_t>(frames.size()), options.fps};
    validate(p.meta);
    for (std::size_t index : result.keyframes.keyframes.indices) p.keyframes.push_back(static_cast<std::uint32_t>(index));
    p.grayscale.reserve(p.meta.grayscale_size());
    for (const auto& frame : frames) {
        const GrayPlane gray = extract_grayscale(frame);
        p.grayscale.insert(p.grayscale.end(), gray.data.begin(), gray.data.end());
    }
    p.model = serialize_model(trained.model);
    validate(p);

    result.report = bandwidth_stats(p.meta, p.model.size());
    return result;
}

std::vector<FrameRGB> decode(const Package& package) {
    validate(package);
    const NetworkModel model = deserialize_model(package.model);
    if (model.input_channels() != 1 || model.output_channels() != 2) {
        throw std::invalid_argument("decode: embedded model must map 1 channel to 2");
    }
    std::vector<FrameRGB> frames;
    frames.reserve(package.meta.frame_count);
    for (std::size_t i = 0; i < package.meta.frame_count; ++i) frames.push_back(predict(model, package.frame(i)));
    return frames;
}

}  // namespace cpk
