#include "salpcc/entropy.hpp"

#include "salpcc/errors.hpp"

namespace salpcc {
namespace {

constexpr std::uint32_t kTop = 1u << 24;

void adapt(BitModel& m, int bit) {
  if (bit == 0)
    m.p0 = static_cast<std::uint16_t>(m.p0 + ((kProbOne - m.p0) >> kAdaptShift));
  else
    m.p0 = static_cast<std::uint16_t>(m.p0 - (m.p0 >> kAdaptShift));
}

}  // namespace

void ArithmeticEncoder::shift_low() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t temp = cache_;
    do {
      out_.push_back(static_cast<std::uint8_t>(temp + carry));
      temp = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<std::uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

void ArithmeticEncoder::encode_bit(BitModel& model, int bit) {
  const std::uint32_t bound = (range_ >> kProbBits) * model.p0;
  if (bit == 0) {
    range_ = bound;
  } else {
    low_ += bound;
    range_ -= bound;
  }
  adapt(model, bit);
  while (range_ < kTop) {
    range_ <<= 8;
    shift_low();
  }
}

void ArithmeticEncoder::encode_byte(ByteModel& model, std::uint8_t byte) {
  std::size_t node = 1;
  for (int b = 7; b >= 0; --b) {
    const int bit = (byte >> b) & 1;
    encode_bit(model.node(node), bit);
    node = (node << 1) | static_cast<std::size_t>(bit);
  }
}

std::vector<std::uint8_t> ArithmeticEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  return std::move(out_);
}

ArithmeticDecoder::ArithmeticDecoder(std::span<const std::uint8_t> bytes) : in_(bytes) {
  if (in_.size() < 5) throw ParseError("entropy-coded section shorter than its preamble", in_.size());
  for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t ArithmeticDecoder::next_byte() {
  if (pos_ >= in_.size()) throw ParseError("truncated entropy-coded section", pos_);
  return in_[pos_++];
}

int ArithmeticDecoder::decode_bit(BitModel& model) {
  const std::uint32_t bound = (range_ >> kProbBits) * model.p0;
  int bit;
  if (code_ < bound) {
    range_ = bound;
    bit = 0;
  } else {
    code_ -= bound;
    range_ -= bound;
    bit = 1;
  }
  adapt(model, bit);
  while (range_ < kTop) {
    range_ <<= 8;
    code_ = (code_ << 8) | next_byte();
  }
  return bit;
}

std::uint8_t ArithmeticDecoder::decode_byte(ByteModel& model) {
  std::size_t node = 1;
  for (int b = 0; b < 8; ++b) node = (node << 1) | static_cast<std::size_t>(decode_bit(model.node(node)));
  return static_cast<std::uint8_t>(node & 0xFF);
}

std::vector<std::uint8_t> arithmetic_encode(std::span<const std::uint8_t> symbols) {
  ArithmeticEncoder enc;
  ByteModel model;
  for (auto s : symbols) enc.encode_byte(model, s);
  return enc.finish();
}

std::vector<std::uint8_t> arithmetic_decode(std::span<const std::uint8_t> bytes, std::size_t count) {
  ArithmeticDecoder dec(bytes);
  ByteModel model;
  std::vector<std::uint8_t> out(count);
  for (auto& s : out) s = dec.decode_byte(model);
  return out;
}

void append_signed_varint(std::vector<std::uint8_t>& out, std::int64_t v) {
  std::uint64_t u = zigzag_encode(v);
  while (u >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(u | 0x80));
    u >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(u));
}

void VarintEncoder::put(std::int64_t v) {
  std::uint64_t u = zigzag_encode(v);
  while (u >= 0x80) {
    coder_.encode_byte(model_, static_cast<std::uint8_t>(u | 0x80));
    u >>= 7;
  }
  coder_.encode_byte(model_, static_cast<std::uint8_t>(u));
}

std::int64_t VarintDecoder::get() {
  std::uint64_t u = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const std::uint8_t b = coder_.decode_byte(model_);
    u |= static_cast<std::uint64_t>(b & 0x7F) << shift;
    if ((b & 0x80) == 0) return zigzag_decode(u);
  }
  throw ParseError("over-long varint in entropy-coded section", coder_.position());
}

}  // namespace salpcc
