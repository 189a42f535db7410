#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cpk {

/// Raised for any malformed serialized model or package.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// IEEE CRC32 (zlib polynomial).
std::uint32_t crc32(std::span<const std::uint8_t> bytes);

/// Little-endian append-only encoder.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void tag(std::string_view four) { buf_.insert(buf_.end(), four.begin(), four.end()); }
    void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }

    std::size_t size() const { return buf_.size(); }
    std::vector<std::uint8_t>& buffer() { return buf_; }
    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    void put(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> buf_;
};

/// Little-endian bounds-checked decoder; throws FormatError on overrun.
class ByteReader {
public:
    ByteReader(std::span<const std::uint8_t> bytes, std::string what) : bytes_(bytes), what_(std::move(what)) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    float f32() { return std::bit_cast<float>(u32()); }
    std::span<const std::uint8_t> bytes(std::size_t n) {
        require(n);
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    void expect_tag(std::string_view four) {
        const auto got = bytes(four.size());
        if (!std::equal(got.begin(), got.end(), four.begin(), four.end(),
                        [](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); })) {
            fail("bad magic, expected \"" + std::string(four) + "\"");
        }
    }

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    [[noreturn]] void fail(const std::string& msg) const { throw FormatError(what_ + ": " + msg); }

private:
    void require(std::size_t n) const {
        if (n > remaining()) fail("truncated at byte " + std::to_string(pos_));
    }
    std::uint64_t get(int n) {
        require(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::span<const std::uint8_t> bytes_;
    std::string what_;
    std::size_t pos_ = 0;
};

}  // namespace cpk
