#pragma once

#include <filesystem>
#include <vector>

#include "colorpack/image.hpp"

namespace cpk {

/// Raw interleaved RGB24, frames back to back. The file size must be a
/// nonzero multiple of width*height*3.
std::vector<FrameRGB> read_raw_rgb24(const std::filesystem::path& path, int width, int height);
void write_raw_rgb24(const std::filesystem::path& path, const std::vector<FrameRGB>& frames);

/// Every *.ppm in the directory, in lexicographic filename order.
std::vector<FrameRGB> read_ppm_directory(const std::filesystem::path& dir);
/// Writes frame_000000.ppm, frame_000001.ppm, ... creating the directory.
void write_ppm_directory(const std::filesystem::path& dir, const std::vector<FrameRGB>& frames);

/// A directory, or a path without an extension, is a PPM frame directory;
/// anything else is a raw RGB24 file.
bool is_ppm_directory_path(const std::filesystem::path& path);

/// Directory input ignores width/height; raw input requires both.
std::vector<FrameRGB> read_video(const std::filesystem::path& path, int width = 0, int height = 0);
void write_video(const std::filesystem::path& path, const std::vector<FrameRGB>& frames);

}  // namespace cpk
