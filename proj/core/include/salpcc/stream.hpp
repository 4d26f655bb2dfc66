#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "salpcc/anchors.hpp"
#include "salpcc/knn_graph.hpp"
#include "salpcc/quantization.hpp"

namespace salpcc {

inline constexpr std::array<char, 4> kStreamMagic{'S', 'A', 'P', 'C'};
inline constexpr std::uint8_t kStreamVersion = 1;
inline constexpr std::size_t kStreamHeaderSize = 4 + 1 + 1 + 4 + 4 + 4 + 5 * 4;

/// Everything the decoder needs, i.e. the logical content of a .sapc stream.
struct StreamContents {
  NeighborGraph graph;
  std::vector<std::uint8_t> visible;  // one flag per vertex
  QuantizedDeltas deltas;
  AnchorSet anchors;

  std::size_t size() const noexcept { return visible.size(); }
  friend bool operator==(const StreamContents&, const StreamContents&) = default;
};

/// Byte sizes of the stream parts, in layout order.
struct SectionSizes {
  std::size_t header = kStreamHeaderSize;
  std::size_t anchors = 0;
  std::size_t visibility = 0;
  std::size_t scales = 0;
  std::size_t adjacency = 0;
  std::size_t deltas = 0;

  std::size_t total() const { return header + anchors + visibility + scales + adjacency + deltas; }
};

struct CodedStream {
  std::vector<std::uint8_t> bytes;
  SectionSizes sections;
  std::size_t points = 0;

  double bpp() const;
};

/// Layout (little-endian): "SAPC" | version u8 | k_n u8 | n u32 | k_c u32 |
/// s_thresh f32 | five section lengths u32 | anchors (u32 index + 3 x u32
/// voxel coordinate each) | visibility bitmask (LSB first) | coded scale
/// codes | coded adjacency (zig-zag varint j - i) | coded zig-zag varint
/// quantized deltas (x, y, z per point).
///
/// Throws std::invalid_argument for n >= 2^32, k_n > 255 or inconsistent
/// contents.
CodedStream write_stream(const StreamContents& contents);

/// Inverse of write_stream. Throws ParseError ("not a SAPC stream", bad
/// version, truncated or inconsistent sections).
StreamContents read_stream(std::span<const std::uint8_t> bytes);

/// Section lengths and point count from the header alone (magic and version
/// are checked, sections are not decoded).
struct StreamHeader {
  std::size_t points = 0;
  std::size_t k = 0;
  float s_thresh = 0.0f;
  SectionSizes sections;
};
StreamHeader read_stream_header(std::span<const std::uint8_t> bytes);

/// 8 * bytes / n.
double measure_bpp(std::size_t bytes, std::size_t n);

}  // namespace salpcc
