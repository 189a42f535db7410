#include <cmath>
#include <random>

#include "colorpack/bytes.hpp"
#include "colorpack/colorizer.hpp"
#include "colorpack/model_io.hpp"
#include "doctest.h"
#include "gradcheck.hpp"

using namespace cpk;

namespace {

const NetworkModel& shared_model() {
    static const NetworkModel model = init_model(1234);
    return model;
}

// Small network with every layer kind, for whole-network gradient checks.
Network<double> tiny_network(std::uint64_t seed) {
    const std::vector<LayerSpec> manifest{
        {LayerSpec::Kind::Conv, 3, 1, Activation::Relu},
        {LayerSpec::Kind::Conv, 4, 2, Activation::Relu},
        {LayerSpec::Kind::Upsample, 0, 1, Activation::None},
        {LayerSpec::Kind::Conv, 2, 1, Activation::Tanh},
    };
    Network<double> net(manifest, 1);
    he_uniform_init(net, seed);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (auto& layer : net.layers()) {
        if (auto* conv = std::get_if<ConvLayer<double>>(&layer)) {
            for (auto& b : conv->bias) b = u(rng);
        }
    }
    return net;
}

}  // namespace

TEST_CASE("architecture follows the layer table") {
    const auto arch = colorizer_architecture();
    REQUIRE(arch.size() == 15);
    const std::vector<int> conv_out{64, 64, 128, 128, 256, 256, 512, 256, 128, 64, 32, 2};
    const std::vector<int> conv_stride{1, 2, 1, 2, 1, 2, 1, 1, 1, 1, 1, 1};
    const std::vector<std::size_t> upsample_at{9, 11, 14};
    std::size_t conv = 0;
    for (std::size_t i = 0; i < arch.size(); ++i) {
        const bool is_up = std::find(upsample_at.begin(), upsample_at.end(), i) != upsample_at.end();
        CHECK((arch[i].kind == LayerSpec::Kind::Upsample) == is_up);
        if (is_up) continue;
        CHECK(arch[i].out_channels == conv_out[conv]);
        CHECK(arch[i].stride == conv_stride[conv]);
        CHECK(arch[i].activation == (conv == 11 ? Activation::Tanh : Activation::Relu));
        ++conv;
    }
    CHECK(conv == 12);
}

TEST_CASE("parameter count") {
    // sum over conv rows of out * (in * 9 + 1)
    const std::vector<std::pair<int, int>> rows{{1, 64},    {64, 64},   {64, 128}, {128, 128}, {128, 256}, {256, 256},
                                                {256, 512}, {512, 256}, {256, 128}, {128, 64},  {64, 32},   {32, 2}};
    std::size_t expected = 0;
    for (auto [in, out] : rows) expected += static_cast<std::size_t>(out) * (in * 9 + 1);
    CHECK(expected == kColorizerParameterCount);
    CHECK(shared_model().parameter_count() == kColorizerParameterCount);
    CHECK(shared_model().input_channels() == 1);
    CHECK(shared_model().output_channels() == 2);
    CHECK(shared_model().spatial_multiple() == 8);
}

TEST_CASE("init_model is deterministic and inside the He bound") {
    const NetworkModel a = init_model(77);
    const NetworkModel b = init_model(77);
    CHECK(a == b);
    CHECK_FALSE(a == init_model(78));
    for (const auto& layer : a.layers()) {
        const auto* conv = std::get_if<ConvLayer<float>>(&layer);
        if (!conv) continue;
        const double bound = std::sqrt(6.0 / (conv->in_channels * 9.0));
        for (float w : conv->weights) CHECK(std::abs(w) <= bound);
        for (float v : conv->bias) CHECK(v == 0.0f);
    }
}

TEST_CASE("forward shapes and range") {
    const auto& model = shared_model();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    Tensor4<float> x(1, 1, 64, 64);
    for (auto& v : x.data) v = u(rng);
    const auto y = model.forward(x);
    CHECK(y.shape == std::array<int, 4>{1, 2, 64, 64});
    for (float v : y.data) {
        CHECK(v > -1.0f);
        CHECK(v < 1.0f);
    }

    const auto rect = model.forward(Tensor4<float>(2, 1, 16, 40));
    CHECK(rect.shape == std::array<int, 4>{2, 2, 16, 40});

    // Zero biases and zero input propagate to tanh(0).
    for (float v : model.forward(Tensor4<float>(1, 1, 8, 8)).data) CHECK(v == 0.0f);

    CHECK_THROWS_AS(model.forward(Tensor4<float>(1, 1, 12, 16)), std::invalid_argument);
    CHECK_THROWS_AS(model.forward(Tensor4<float>(1, 2, 16, 16)), std::invalid_argument);
}

TEST_CASE("zero input with nonzero biases stays finite") {
    NetworkModel model = init_model(5);
    for (auto& layer : model.layers()) {
        if (auto* conv = std::get_if<ConvLayer<float>>(&layer)) std::fill(conv->bias.begin(), conv->bias.end(), 0.05f);
    }
    for (float v : model.forward(Tensor4<float>(1, 1, 16, 16)).data) {
        CHECK(std::isfinite(v));
        CHECK(std::abs(v) < 1.0f);
    }
}

TEST_CASE("whole-network gradients match finite differences") {
    Network<double> net = tiny_network(9);
    std::mt19937_64 rng(10);
    Tensor4<double> input = cpk::testing::random_tensor(2, 1, 6, 6, rng);
    const Tensor4<double> target = cpk::testing::random_tensor(2, 2, 6, 6, rng, -0.5, 0.5);

    const auto trace = net.forward_trace(input);
    const auto loss = mse_loss(trace.output(), target);
    const auto grads = net.backward(trace, loss.gradient);
    auto objective = [&] { return mse_loss(net.forward(input), target).loss; };

    auto params = net.parameters();
    cpk::testing::GradCheckResult worst;
    for (std::size_t i = 0; i < grads.weights.size(); ++i) {
        AlignedVector<double> w(params[2 * i].begin(), params[2 * i].end());
        // check_coordinates perturbs its own vector; mirror it into the layer.
        auto mirrored = [&, i] {
            std::copy(w.begin(), w.end(), params[2 * i].begin());
            return objective();
        };
        worst = cpk::testing::merge(worst, cpk::testing::check_coordinates(w, grads.weights[i], mirrored, 10, rng));
        std::copy(w.begin(), w.end(), params[2 * i].begin());
    }
    worst = cpk::testing::merge(worst, cpk::testing::check_coordinates(input.data, grads.input.data, objective, 10, rng));
    CHECK(worst.coordinates == 40);
    CHECK(worst.max_relative_error < 1e-4);
}

TEST_CASE("adam") {
    SUBCASE("zero gradient leaves parameters alone") {
        std::vector<double> p{1.0, -2.0, 3.5};
        const std::vector<double> g(3, 0.0);
        std::vector<std::span<double>> ps{p};
        std::vector<std::span<const double>> gs{g};
        AdamState<double> state(ps);
        adam_step<double>(ps, gs, state);
        CHECK(p == std::vector<double>{1.0, -2.0, 3.5});
        CHECK(state.step == 1);
    }
    SUBCASE("first step moves by about lr against the gradient") {
        std::vector<double> p{0.0, 0.0, 0.0, 0.0};
        const std::vector<double> g{1e-3, -5.0, 123.0, -0.2};
        std::vector<std::span<double>> ps{p};
        std::vector<std::span<const double>> gs{g};
        AdamState<double> state(ps);
        adam_step<double>(ps, gs, state);
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p[i] == doctest::Approx(-0.001 * (g[i] > 0 ? 1 : -1)).epsilon(1e-4));
        }
    }
    SUBCASE("quadratic descent tracks a scalar simulation") {
        std::vector<double> w{1.0};
        std::vector<double> g{0.0};
        std::vector<std::span<double>> ps{w};
        std::vector<std::span<const double>> gs{g};
        AdamState<double> state(ps);

        double sw = 1.0, m = 0.0, v = 0.0;
        double previous = std::abs(w[0]);
        for (int t = 1; t <= 100; ++t) {
            g[0] = 2.0 * w[0];
            adam_step<double>(ps, gs, state);
            const double sg = 2.0 * sw;
            m = 0.9 * m + 0.1 * sg;
            v = 0.999 * v + 0.001 * sg * sg;
            sw -= 0.001 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
            CHECK(std::abs(w[0] - sw) < 1e-12);
            CHECK(std::abs(w[0]) < previous);
            previous = std::abs(w[0]);
        }
    }
    SUBCASE("shape mismatch") {
        std::vector<double> p{1.0, 2.0};
        const std::vector<double> g{1.0};
        std::vector<std::span<double>> ps{p};
        std::vector<std::span<const double>> gs{g};
        AdamState<double> state(ps);
        CHECK_THROWS_AS(adam_step<double>(ps, gs, state), std::invalid_argument);
    }
}

TEST_CASE("training on a constant keyframe") {
    const std::vector<FrameRGB> keyframes{FrameRGB(16, 16, 200, 80, 40)};
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.batch_size = 1;
    cfg.width = 16;
    cfg.height = 16;
    cfg.seed = 3;
    const auto result = train(init_model(3), keyframes, cfg);
    REQUIRE(result.loss_history.size() == 200);
    for (double l : result.loss_history) CHECK(std::isfinite(l));
    CHECK(result.loss_history.back() < 0.01 * result.loss_history.front());

    cfg.epochs = 5;
    const auto again1 = train(init_model(3), keyframes, cfg);
    const auto again2 = train(init_model(3), keyframes, cfg);
    CHECK(again1.loss_history == again2.loss_history);
    CHECK(again1.model == again2.model);
}

TEST_CASE("training input validation") {
    TrainConfig cfg;
    cfg.width = 20;
    cfg.height = 16;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.width = 16;
    cfg.batch_size = 0;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.batch_size = 2;
    CHECK_THROWS_AS(train(init_model(1), std::vector<FrameRGB>{}, cfg), std::invalid_argument);
}

TEST_CASE("predict handles arbitrary sizes and keeps L") {
    const auto& model = shared_model();
    const GrayPlane zeros(24, 16);
    const FrameRGB black = predict(model, zeros);
    CHECK(black.width == 24);
    CHECK(black.height == 16);

    std::mt19937 rng(4);
    GrayPlane odd(13, 7);
    for (auto& v : odd.data) v = static_cast<std::uint8_t>(rng() & 0xFF);
    const FrameRGB out = predict(model, odd);
    CHECK(out.width == 13);
    CHECK(out.height == 7);
    const FrameLab lab = rgb_to_lab(out);
    for (std::size_t i = 0; i < odd.pixel_count(); ++i) CHECK(std::abs(lab.L[i] - dequantize_L(odd.data[i])) <= 2.0);

    const GrayPlane one(1, 1);
    CHECK(predict(model, one).data.size() == 3);
}

TEST_CASE("model serialization") {
    const auto& model = shared_model();
    const auto bytes = serialize_model(model);
    CHECK(bytes.size() == serialized_model_size(model));
    // 16-byte header, 12 conv manifests of 7 bytes, 3 upsample markers, weights, CRC.
    CHECK(bytes.size() == 16 + 12 * 7 + 3 + kColorizerParameterCount * 4 + 4);

    const NetworkModel back = deserialize_model(bytes);
    CHECK(back == model);
    CHECK(serialize_model(back) == bytes);

    std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + 1000);
    CHECK_THROWS_AS(deserialize_model(truncated), FormatError);
    CHECK_THROWS_AS(deserialize_model(std::vector<std::uint8_t>{}), FormatError);

    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(deserialize_model(bad_magic), FormatError);

    auto bad_version = bytes;
    bad_version[4] = 9;
    CHECK_THROWS_AS(deserialize_model(bad_version), FormatError);

    auto flipped = bytes;
    flipped[bytes.size() / 2] ^= 0x10;
    CHECK_THROWS_AS(deserialize_model(flipped), FormatError);
}
