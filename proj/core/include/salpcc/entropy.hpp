#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace salpcc {

// Adaptive binary range coder. Bytes are coded MSB-first through a 255-node
// bit tree of adaptive probabilities (an order-0 byte model), so skewed byte
// distributions cost well under a bit per symbol.

inline constexpr int kProbBits = 15;
inline constexpr std::uint32_t kProbOne = 1u << kProbBits;
inline constexpr int kAdaptShift = 5;

struct BitModel {
  std::uint16_t p0 = kProbOne / 2;  // probability of a zero bit, scaled by kProbOne
};

class ByteModel {
 public:
  BitModel& node(std::size_t i) { return nodes_[i]; }

 private:
  std::array<BitModel, 256> nodes_{};
};

class ArithmeticEncoder {
 public:
  void encode_bit(BitModel& model, int bit);
  void encode_byte(ByteModel& model, std::uint8_t byte);
  /// Flushes the coder state and returns the coded bytes. The encoder must not
  /// be used afterwards.
  std::vector<std::uint8_t> finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  std::vector<std::uint8_t> out_;
};

class ArithmeticDecoder {
 public:
  /// Throws ParseError if the input is shorter than the coder preamble.
  explicit ArithmeticDecoder(std::span<const std::uint8_t> bytes);

  int decode_bit(BitModel& model);
  std::uint8_t decode_byte(ByteModel& model);

  /// Bytes consumed so far.
  std::size_t position() const noexcept { return pos_; }

 private:
  std::uint8_t next_byte();

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
};

/// Codes a byte sequence with a fresh adaptive model. An empty input yields
/// the 5-byte coder preamble only.
std::vector<std::uint8_t> arithmetic_encode(std::span<const std::uint8_t> symbols);

/// Decodes `count` bytes. Throws ParseError when the stream is truncated.
std::vector<std::uint8_t> arithmetic_decode(std::span<const std::uint8_t> bytes, std::size_t count);

inline std::uint64_t zigzag_encode(std::int64_t v) {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

inline std::int64_t zigzag_decode(std::uint64_t v) {
  return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1);
}

/// LEB128 varint of a zig-zag mapped signed value.
void append_signed_varint(std::vector<std::uint8_t>& out, std::int64_t v);

/// Signed varints coded through a shared adaptive byte model.
class VarintEncoder {
 public:
  void put(std::int64_t v);
  std::vector<std::uint8_t> finish() { return coder_.finish(); }

 private:
  ArithmeticEncoder coder_;
  ByteModel model_;
};

class VarintDecoder {
 public:
  explicit VarintDecoder(std::span<const std::uint8_t> bytes) : coder_(bytes) {}

  /// Throws ParseError on truncation or an over-long varint.
  std::int64_t get();

 private:
  ArithmeticDecoder coder_;
  ByteModel model_;
};

}  // namespace salpcc
