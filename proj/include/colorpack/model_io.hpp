#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "colorpack/network.hpp"

namespace cpk {

inline constexpr std::uint16_t kModelFormatVersion = 1;
inline constexpr std::size_t kModelHeaderSize = 16;

/// Little-endian layout:
///   "CPKM" | version u16 | layer count u16 | payload length u64
///   payload: per layer a kind byte (0 conv, 1 upsample); conv layers then carry
///            out_ch u16, in_ch u16, stride u8, activation u8,
///            out*in*9 f32 weights, out f32 biases
///   CRC32 of the payload (u32)
std::vector<std::uint8_t> serialize_model(const NetworkModel& model);

/// Throws FormatError on bad magic/version, length mismatch, CRC mismatch,
/// inconsistent channel chaining or non-finite weights.
NetworkModel deserialize_model(std::span<const std::uint8_t> bytes);

std::size_t serialized_model_size(const NetworkModel& model);

void save_model(const std::filesystem::path& path, const NetworkModel& model);
NetworkModel load_model(const std::filesystem::path& path);

}  // namespace cpk
