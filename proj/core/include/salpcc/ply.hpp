#pragma once

#include <filesystem>

#include "salpcc/point_cloud.hpp"

namespace salpcc {

enum class PlyMode { kAscii, kBinary };

/// Reads the vertex element of an ASCII or binary_little_endian 1.0 PLY file.
/// x/y/z may be any scalar numeric type; red/green/blue (uchar) are loaded
/// when all three are present. Elements after the vertex element are ignored.
///
/// Throws ParseError (with the byte offset) for malformed headers,
/// unsupported formats or property types, and truncated payloads.
PointCloud load_ply(const std::filesystem::path& path);

/// Parses PLY content already held in memory.
PointCloud parse_ply(std::span<const char> bytes);

/// Writes x/y/z as float when every coordinate is exactly representable in
/// single precision, otherwise as double, so binary files always reload
/// bit-identically. Colors are written as red/green/blue uchar.
void save_ply(const PointCloud& pc, const std::filesystem::path& path,
              PlyMode mode = PlyMode::kBinary);

}  // namespace salpcc
