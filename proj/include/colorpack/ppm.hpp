#pragma once

#include <filesystem>
#include <iosfwd>

#include "colorpack/image.hpp"

namespace cpk {

/// Binary P6 with maxval 255. Comments in the header are skipped.
FrameRGB read_ppm(const std::filesystem::path& path);
FrameRGB read_ppm(std::istream& in);
void write_ppm(const std::filesystem::path& path, const FrameRGB& frame);
void write_ppm(std::ostream& out, const FrameRGB& frame);

}  // namespace cpk
