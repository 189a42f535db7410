#include "colorpack/model_io.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

#include "colorpack/bytes.hpp"

namespace cpk {

namespace {

constexpr std::uint8_t kConvTag = 0;
constexpr std::uint8_t kUpsampleTag = 1;

}  // namespace

std::vector<std::uint8_t> serialize_model(const NetworkModel& model) {
    ByteWriter payload;
    for (const auto& layer : model.layers()) {
        const auto* conv = std::get_if<ConvLayer<float>>(&layer);
        if (!conv) {
            payload.u8(kUpsampleTag);
            continue;
        }
        payload.u8(kConvTag);
        payload.u16(static_cast<std::uint16_t>(conv->out_channels));
        payload.u16(static_cast<std::uint16_t>(conv->in_channels));
        payload.u8(static_cast<std::uint8_t>(conv->stride));
        payload.u8(static_cast<std::uint8_t>(conv->activation));
        for (float w : conv->weights) payload.f32(w);
        for (float b : conv->bias) payload.f32(b);
    }

    ByteWriter out;
    out.tag("CPKM");
    out.u16(kModelFormatVersion);
    out.u16(static_cast<std::uint16_t>(model.layers().size()));
    out.u64(payload.size());
    out.bytes(payload.buffer());
    out.u32(crc32(payload.buffer()));
    return out.take();
}

std::size_t serialized_model_size(const NetworkModel& model) {
    std::size_t size = kModelHeaderSize + 4;
    for (const auto& layer : model.layers()) {
        const auto* conv = std::get_if<ConvLayer<float>>(&layer);
        size += conv ? 7 + 4 * conv->parameter_count() : 1;
    }
    return size;
}

NetworkModel deserialize_model(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes, "model");
    in.expect_tag("CPKM");
    const std::uint16_t version = in.u16();
    if (version != kModelFormatVersion) in.fail("unsupported version " + std::to_string(version));
    const std::uint16_t layer_count = in.u16();
    const std::uint64_t payload_length = in.u64();
    if (payload_length > in.remaining() || in.remaining() - payload_length != 4) {
        in.fail("payload length " + std::to_string(payload_length) + " does not match file size");
    }
    const auto payload = bytes.subspan(in.position(), payload_length);
    ByteReader body(payload, "model payload");
    ByteReader trailer(bytes.subspan(in.position() + payload_length), "model trailer");
    if (trailer.u32() != crc32(payload)) in.fail("CRC mismatch");

    NetworkModel model;
    int channels = -1;
    for (std::uint16_t i = 0; i < layer_count; ++i) {
        const std::uint8_t tag = body.u8();
        if (tag == kUpsampleTag) {
            model.layers().emplace_back(UpsampleLayer{});
            continue;
        }
        if (tag != kConvTag) body.fail("unknown layer kind " + std::to_string(tag));
        const int out_ch = body.u16();
        const int in_ch = body.u16();
        const int stride = body.u8();
        const std::uint8_t act = body.u8();
        if (out_ch < 1 || in_ch < 1) body.fail("conv layer with zero channels");
        if (stride != 1 && stride != 2) body.fail("stride " + std::to_string(stride));
        if (act > static_cast<std::uint8_t>(Activation::Tanh)) body.fail("activation " + std::to_string(act));
        if (channels >= 0 && in_ch != channels) body.fail("layer " + std::to_string(i) + " channel chain broken");
        channels = out_ch;

        ConvLayer<float> conv(out_ch, in_ch, stride, static_cast<Activation>(act));
        for (float& w : conv.weights) w = body.f32();
        for (float& b : conv.bias) b = body.f32();
        for (float w : conv.weights) {
            if (!std::isfinite(w)) body.fail("non-finite weight");
        }
        for (float b : conv.bias) {
            if (!std::isfinite(b)) body.fail("non-finite bias");
        }
        model.layers().emplace_back(std::move(conv));
    }
    if (body.remaining() != 0) body.fail("trailing bytes after last layer");
    return model;
}

void save_model(const std::filesystem::path& path, const NetworkModel& model) {
    const auto bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

NetworkModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

}  // namespace cpk
