#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "colorpack/bandwidth.hpp"
#include "colorpack/codec.hpp"
#include "colorpack/keyframes.hpp"
#include "colorpack/package.hpp"
#include "colorpack/video_io.hpp"

namespace {

using namespace cpk;

struct CliConfig {
    std::string input;
    std::string output;
    std::string reference;
    int width = 0;
    int height = 0;
    std::string fps = "30";
    std::size_t x_step = kDefaultKeyframeStep;
    std::optional<double> bandwidth;
    std::uint64_t seed = 0;
    int epochs = 200;
    int batch = 8;
    std::string train_size = "256";
    double model_size = 0.0;  // MiB
    double duration = 0.0;    // seconds
};

// "30" or "30000/1001"
FrameRate parse_fps(const std::string& text) {
    const auto slash = text.find('/');
    unsigned long num = 0, den = 1;
    try {
        std::size_t used = 0;
        num = std::stoul(text.substr(0, slash), &used);
        if (used != slash && slash != std::string::npos) throw std::invalid_argument("");
        if (slash == std::string::npos && used != text.size()) throw std::invalid_argument("");
        if (slash != std::string::npos) {
            const std::string rest = text.substr(slash + 1);
            den = std::stoul(rest, &used);
            if (used != rest.size()) throw std::invalid_argument("");
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("--fps: expected N or N/D, got '" + text + "'");
    }
    if (num < 1 || den < 1 || num > 65535 || den > 65535) {
        throw std::invalid_argument("--fps: numerator and denominator must be in 1..65535");
    }
    return {static_cast<std::uint16_t>(num), static_cast<std::uint16_t>(den)};
}

// "256" or "320x256"
std::pair<int, int> parse_train_size(const std::string& text) {
    int w = 0, h = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%dx%d%c", &w, &h, &extra) == 2) {
    } else if (std::sscanf(text.c_str(), "%d%c", &w, &extra) == 1) {
        h = w;
    } else {
        throw std::invalid_argument("--train-size: expected N or WxH, got '" + text + "'");
    }
    if (w < 8 || h < 8 || w % 8 != 0 || h % 8 != 0) {
        throw std::invalid_argument("--train-size " + text +
                                    ": width and height must be positive multiples of 8 (the network downsamples by 8)");
    }
    return {w, h};
}

std::vector<FrameRGB> load_input(const CliConfig& cfg) {
    if (cfg.input.empty()) throw std::invalid_argument("--input is empty");
    if (!is_ppm_directory_path(cfg.input) && (cfg.width <= 0 || cfg.height <= 0)) {
        throw std::invalid_argument("raw RGB24 input needs --width and --height");
    }
    auto frames = read_video(cfg.input, cfg.width, cfg.height);
    if (frames.empty()) throw std::runtime_error("no frames in " + cfg.input);
    return frames;
}

KeyframeOptions keyframe_options(const CliConfig& cfg) {
    KeyframeOptions opt;
    opt.step = cfg.x_step;
    opt.mean_shift.bandwidth = cfg.bandwidth;
    return opt;
}

std::string fmt(double v, int digits) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void print_report(const BandwidthReport& r, const VideoMeta& meta) {
    std::cout << "width,height,frames,raw_bytes,package_bytes,model_bytes,saved_bytes,raw_mib,package_mib,model_mib,"
                 "saved_mib,saved_gib,percent_saved\n";
    std::cout << meta.width << ',' << meta.height << ',' << meta.frame_count << ',' << r.raw_size << ','
              << r.package_size << ',' << r.model_size << ',' << r.saved << ',' << fmt(r.raw_mib(), 2) << ','
              << fmt(r.package_mib(), 2) << ',' << fmt(r.model_mib(), 2) << ',' << fmt(r.saved_mib(), 2) << ','
              << fmt(r.saved_gib(), 2) << ',' << fmt(r.percent_saved, 2) << '\n';
    std::cerr << "saved " << fmt(r.saved_mib(), 2) << " MiB (" << fmt(r.saved_gib(), 2) << " GiB), "
              << fmt(r.percent_saved, 2) << "% of " << fmt(r.raw_mib(), 2) << " MiB raw\n";
}

int cmd_keyframes(const CliConfig& cfg) {
    const auto frames = load_input(cfg);
    const KeyframeResult kf = extract_keyframes(frames, keyframe_options(cfg));
    std::cout << "index\n";
    for (std::size_t i : kf.keyframes.indices) std::cout << i << '\n';
    if (!cfg.output.empty()) {
        std::ofstream table(cfg.output);
        if (!table) throw std::runtime_error("cannot write " + cfg.output);
        table << "frame,distance,cluster\n";
        for (std::size_t i = 0; i < kf.series.distances.size(); ++i) {
            table << i << ',' << fmt(kf.series.distances[i], 4) << ',' << kf.series.labels[i] << '\n';
        }
        if (!table) throw std::runtime_error("write failed: " + cfg.output);
    }
    std::cerr << frames.size() << " frames, " << kf.series.cluster_count() << " clusters (bandwidth "
              << fmt(kf.bandwidth, 2) << "), " << kf.keyframes.indices.size() << " keyframes\n";
    return 0;
}

int cmd_encode(const CliConfig& cfg) {
    const auto [tw, th] = parse_train_size(cfg.train_size);
    EncodeOptions opt;
    opt.keyframes = keyframe_options(cfg);
    opt.fps = parse_fps(cfg.fps);
    opt.train.epochs = cfg.epochs;
    opt.train.batch_size = cfg.batch;
    opt.train.width = tw;
    opt.train.height = th;
    opt.train.seed = cfg.seed;
    opt.progress = [](std::size_t step, int epoch, double loss) {
        if (step % 50 == 0) std::cerr << "step " << step << " epoch " << epoch << " loss " << fmt(loss, 6) << '\n';
    };

    const auto frames = load_input(cfg);
    const EncodeResult result = encode(frames, opt);
    write_package(cfg.output, result.package);
    std::cerr << result.keyframes.keyframes.indices.size() << " keyframes, "
              << result.keyframes.series.cluster_count() << " clusters; final loss "
              << (result.loss_history.empty() ? "n/a" : fmt(result.loss_history.back(), 6)) << '\n';
    print_report(result.report, result.package.meta);
    return 0;
}

int cmd_decode(const CliConfig& cfg) {
    const Package package = read_package(cfg.input);
    const auto frames = decode(package);
    write_video(cfg.output, frames);
    std::cout << "width,height,frames\n"
              << package.meta.width << ',' << package.meta.height << ',' << frames.size() << '\n';
    std::cerr << "decoded " << frames.size() << " frames to " << cfg.output << '\n';
    return 0;
}

int cmd_stats(const CliConfig& cfg) {
    if (cfg.width <= 0 || cfg.height <= 0) throw std::invalid_argument("stats needs --width and --height");
    const FrameRate fps = parse_fps(cfg.fps);
    VideoMeta meta{cfg.width, cfg.height, frames_for_duration(cfg.duration, fps), fps};
    const auto model_bytes = static_cast<std::uint64_t>(std::llround(cfg.model_size * kMiB));
    print_report(bandwidth_stats(meta, model_bytes), meta);
    return 0;
}

int cmd_eval(const CliConfig& cfg) {
    const auto decoded = load_input(cfg);
    CliConfig ref = cfg;
    ref.input = cfg.reference;
    const auto original = load_input(ref);
    const VideoMetrics m = evaluate(decoded, original);
    std::cout << "frame,mse_rgb,psnr,ab_mse\n";
    for (std::size_t i = 0; i < m.frames.size(); ++i) {
        const auto& f = m.frames[i];
        std::cout << i << ',' << fmt(f.mse_rgb, 6) << ',' << fmt(f.psnr, 4) << ',' << fmt(f.ab_mse, 8) << '\n';
    }
    std::cout << "mean,," << fmt(m.mean_psnr, 4) << ',' << fmt(m.mean_ab_mse, 8) << '\n';
    std::cerr << m.frames.size() << " frames: mean PSNR " << fmt(m.mean_psnr, 2) << " dB, pooled "
              << fmt(m.pooled_psnr, 2) << " dB, ab MSE " << fmt(m.mean_ab_mse, 6) << '\n';
    return 0;
}

void add_video_flags(CLI::App* sub, CliConfig& cfg) {
    sub->add_option("--width", cfg.width, "Frame width for raw RGB24 input")->check(CLI::PositiveNumber);
    sub->add_option("--height", cfg.height, "Frame height for raw RGB24 input")->check(CLI::PositiveNumber);
}

void add_keyframe_flags(CLI::App* sub, CliConfig& cfg) {
    sub->add_option("--x-step", cfg.x_step, "Keep every x-th frame of each cluster")->check(CLI::PositiveNumber);
    sub->add_option("--bandwidth", cfg.bandwidth, "Mean shift bandwidth (default: automatic)")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"colorpack: send grayscale video plus a colorization network"};
    app.require_subcommand(1);
    CliConfig cfg;

    auto* kf = app.add_subcommand("keyframes", "List keyframe indices; --output writes the distance table");
    kf->add_option("--input", cfg.input, "Raw RGB24 file or PPM directory")->required();
    kf->add_option("--output", cfg.output, "CSV of frame, distance, cluster");
    add_video_flags(kf, cfg);
    add_keyframe_flags(kf, cfg);

    auto* enc = app.add_subcommand("encode", "Train on keyframes and write a package");
    enc->add_option("--input", cfg.input, "Raw RGB24 file or PPM directory")->required();
    enc->add_option("--output", cfg.output, "Package file")->required();
    add_video_flags(enc, cfg);
    add_keyframe_flags(enc, cfg);
    enc->add_option("--fps", cfg.fps, "Frame rate, N or N/D")->capture_default_str();
    enc->add_option("--seed", cfg.seed, "Initialization and shuffle seed")->capture_default_str();
    enc->add_option("--epochs", cfg.epochs, "Passes over the keyframes")->check(CLI::PositiveNumber)->capture_default_str();
    enc->add_option("--batch", cfg.batch, "Batch size")->check(CLI::PositiveNumber)->capture_default_str();
    enc->add_option("--train-size", cfg.train_size, "Training resolution, N or WxH, multiple of 8")
        ->capture_default_str();

    auto* dec = app.add_subcommand("decode", "Colorize a package");
    dec->add_option("--input", cfg.input, "Package file")->required();
    dec->add_option("--output", cfg.output, "Raw RGB24 file or PPM directory")->required();

    auto* st = app.add_subcommand("stats", "Bandwidth savings without encoding");
    add_video_flags(st, cfg);
    st->add_option("--duration", cfg.duration, "Seconds")->required()->check(CLI::PositiveNumber);
    st->add_option("--model-size", cfg.model_size, "Model size in MiB")->required()->check(CLI::NonNegativeNumber);
    st->add_option("--fps", cfg.fps, "Frame rate, N or N/D")->capture_default_str();

    auto* ev = app.add_subcommand("eval", "Compare a decoded video to the original");
    ev->add_option("--input", cfg.input, "Decoded video")->required();
    ev->add_option("--reference", cfg.reference, "Original video")->required();
    add_video_flags(ev, cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (kf->parsed()) return cmd_keyframes(cfg);
        if (enc->parsed()) return cmd_encode(cfg);
        if (dec->parsed()) return cmd_decode(cfg);
        if (st->parsed()) return cmd_stats(cfg);
        if (ev->parsed()) return cmd_eval(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
