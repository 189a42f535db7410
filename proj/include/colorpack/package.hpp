#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "colorpack/bandwidth.hpp"
#include "colorpack/image.hpp"

namespace cpk {

inline constexpr std::uint16_t kPackageFormatVersion = 1;

/// The transmission unit: grayscale L stream plus the serialized colorizer.
///
/// Little-endian layout:
///   "CPK1" | version u16 | width u16 | height u16 | frame_count u32
///   | fps numerator u16 | fps denominator u16
///   | keyframe count u16 | keyframe indices u32 x count
///   | model length u64
///   | grayscale payload (frame_count planes of width*height bytes)
///   | model bytes
///   | CRC32 of everything above (u32)
struct Package {
    VideoMeta meta;
    std::vector<std::uint32_t> keyframes;
    std::vector<std::uint8_t> grayscale;  // frame-major planes
    std::vector<std::uint8_t> model;

    GrayPlane frame(std::size_t index) const;
    bool operator==(const Package&) const = default;
};

/// Throws std::invalid_argument when sizes disagree with the header fields.
void validate(const Package& package);

std::vector<std::uint8_t> serialize_package(const Package& package);
/// Throws FormatError on any structural problem.
Package parse_package(std::span<const std::uint8_t> bytes);

void write_package(const std::filesystem::path& path, const Package& package);
Package read_package(const std::filesystem::path& path);

}  // namespace cpk
