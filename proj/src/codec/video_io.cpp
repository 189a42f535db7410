#include "colorpack/video_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "colorpack/ppm.hpp"

namespace fs = std::filesystem;

namespace cpk {

std::vector<FrameRGB> read_raw_rgb24(const fs::path& path, int width, int height) {
    if (width < 1 || height < 1) throw std::invalid_argument("raw RGB24 input needs --width and --height");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const auto file_size = fs::file_size(path);
    const std::uint64_t frame_bytes = static_cast<std::uint64_t>(width) * height * 3;
    if (file_size == 0 || file_size % frame_bytes != 0) {
        throw std::runtime_error(path.string() + ": size " + std::to_string(file_size) +
                                 " is not a positive multiple of the frame size " + std::to_string(frame_bytes));
    }
    std::vector<FrameRGB> frames(file_size / frame_bytes, FrameRGB(width, height));
    for (auto& frame : frames) {
        in.read(reinterpret_cast<char*>(frame.data.data()), static_cast<std::streamsize>(frame_bytes));
        if (!in) throw std::runtime_error(path.string() + ": short read");
    }
    return frames;
}

void write_raw_rgb24(const fs::path& path, const std::vector<FrameRGB>& frames) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& frame : frames) {
        validate(frame);
        out.write(reinterpret_cast<const char*>(frame.data.data()), static_cast<std::streamsize>(frame.data.size()));
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<FrameRGB> read_ppm_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ppm") files.push_back(entry.path());
    }
    if (files.empty()) throw std::runtime_error(dir.string() + " contains no .ppm frames");
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

    std::vector<FrameRGB> frames;
    frames.reserve(files.size());
    for (const auto& f : files) frames.push_back(read_ppm(f));
    return frames;
}

void write_ppm_directory(const fs::path& dir, const std::vector<FrameRGB>& frames) {
    fs::create_directories(dir);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06zu.ppm", i);
        write_ppm(dir / name, frames[i]);
    }
}

bool is_ppm_directory_path(const fs::path& path) {
    return fs::is_directory(path) || !path.has_extension();
}

std::vector<FrameRGB> read_video(const fs::path& path, int width, int height) {
    if (path.empty()) throw std::invalid_argument("empty input path");
    if (!fs::exists(path)) throw std::runtime_error(path.string() + " does not exist");
    if (fs::is_directory(path)) return read_ppm_directory(path);
    return read_raw_rgb24(path, width, height);
}

void write_video(const fs::path& path, const std::vector<FrameRGB>& frames) {
    if (path.empty()) throw std::invalid_argument("empty output path");
    if (is_ppm_directory_path(path)) {
        write_ppm_directory(path, frames);
    } else {
        write_raw_rgb24(path, frames);
    }
}

}  // namespace cpk
