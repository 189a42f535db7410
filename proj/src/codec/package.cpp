#include "colorpack/package.hpp"

#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>

#include "colorpack/bytes.hpp"

namespace cpk {

GrayPlane Package::frame(std::size_t index) const {
    if (index >= meta.frame_count) throw std::out_of_range("Package::frame: index " + std::to_string(index));
    GrayPlane plane(meta.width, meta.height);
    const std::size_t n = plane.pixel_count();
    const auto first = grayscale.begin() + static_cast<std::ptrdiff_t>(index * n);
    std::copy(first, first + static_cast<std::ptrdiff_t>(n), plane.data.begin());
    return plane;
}

void validate(const Package& package) {
    validate(package.meta);
    constexpr int kMaxExtent = std::numeric_limits<std::uint16_t>::max();
    if (package.meta.width > kMaxExtent || package.meta.height > kMaxExtent) {
        throw std::invalid_argument("package: frame dimensions exceed 65535");
    }
    if (package.grayscale.size() != package.meta.grayscale_size()) {
        throw std::invalid_argument("package: grayscale payload is " + std::to_string(package.grayscale.size()) +
                                    " bytes, expected " + std::to_string(package.meta.grayscale_size()));
    }
    if (package.keyframes.size() > std::numeric_limits<std::uint16_t>::max()) {
        throw std::invalid_argument("package: too many keyframe indices");
    }
    for (std::uint32_t k : package.keyframes) {
        if (k >= package.meta.frame_count) throw std::invalid_argument("package: keyframe index out of range");
    }
}

std::vector<std::uint8_t> serialize_package(const Package& package) {
    validate(package);
    ByteWriter out;
    out.buffer().reserve(64 + 4 * package.keyframes.size() + package.grayscale.size() + package.model.size());
    out.tag("CPK1");
    out.u16(kPackageFormatVersion);
    out.u16(static_cast<std::uint16_t>(package.meta.width));
    out.u16(static_cast<std::uint16_t>(package.meta.height));
    out.u32(package.meta.frame_count);
    out.u16(package.meta.fps.numerator);
    out.u16(package.meta.fps.denominator);
    out.u16(static_cast<std::uint16_t>(package.keyframes.size()));
    for (std::uint32_t k : package.keyframes) out.u32(k);
    out.u64(package.model.size());
    out.bytes(package.grayscale);
    out.bytes(package.model);
    const std::uint32_t crc = crc32(out.buffer());
    out.u32(crc);
    return out.take();
}

Package parse_package(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) throw FormatError("package: truncated");
    const auto body = bytes.first(bytes.size() - 4);
    ByteReader trailer(bytes.last(4), "package trailer");
    if (trailer.u32() != crc32(body)) throw FormatError("package: CRC mismatch");

    ByteReader in(body, "package");
    in.expect_tag("CPK1");
    const std::uint16_t version = in.u16();
    if (version != kPackageFormatVersion) in.fail("unsupported version " + std::to_string(version));

    Package p;
    p.meta.width = in.u16();
    p.meta.height = in.u16();
    p.meta.frame_count = in.u32();
    p.meta.fps.numerator = in.u16();
    p.meta.fps.denominator = in.u16();
    if (p.meta.width < 1 || p.meta.height < 1 || p.meta.frame_count < 1 || p.meta.fps.numerator < 1 ||
        p.meta.fps.denominator < 1) {
        in.fail("header has a zero field");
    }
    const std::uint16_t keyframe_count = in.u16();
    p.keyframes.reserve(keyframe_count);
    for (std::uint16_t i = 0; i < keyframe_count; ++i) {
        const std::uint32_t k = in.u32();
        if (k >= p.meta.frame_count) in.fail("keyframe index out of range");
        p.keyframes.push_back(k);
    }
    const std::uint64_t model_length = in.u64();
    const std::uint64_t payload_length = p.meta.grayscale_size();
    if (payload_length > in.remaining() || in.remaining() - payload_length != model_length) {
        in.fail("payload/model lengths do not match file size");
    }
    const auto gray = in.bytes(payload_length);
    p.grayscale.assign(gray.begin(), gray.end());
    const auto model = in.bytes(model_length);
    p.model.assign(model.begin(), model.end());
    return p;
}

void write_package(const std::filesystem::path& path, const Package& package) {
    const auto bytes = serialize_package(package);
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

Package read_package(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_package(bytes);
}

}  // namespace cpk
