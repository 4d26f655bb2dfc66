#include "salpcc/stream.hpp"

#include <bit>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "salpcc/entropy.hpp"
#include "salpcc/errors.hpp"

namespace salpcc {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[offset + b]) << (8 * b);
  return v;
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t count, const char* what) {
    if (count > bytes_.size() - pos_)
      throw ParseError(std::string("truncated ") + what + " section", bytes_.size());
    const auto s = bytes_.subspan(pos_, count);
    pos_ += count;
    return s;
  }
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> code_scales(std::span<const std::uint8_t> codes) { return arithmetic_encode(codes); }

std::vector<std::uint8_t> code_adjacency(const NeighborGraph& g) {
  VarintEncoder enc;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (auto j : g.neighbors(i)) enc.put(static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i));
  return enc.finish();
}

std::vector<std::uint8_t> code_deltas(const std::vector<QuantizedDelta>& q) {
  VarintEncoder enc;
  for (const auto& d : q)
    for (auto c : d) enc.put(c);
  return enc.finish();
}

}  // namespace

double measure_bpp(std::size_t bytes, std::size_t n) {
  if (n == 0) throw std::invalid_argument("bits per point needs at least one point");
  return 8.0 * static_cast<double>(bytes) / static_cast<double>(n);
}

double CodedStream::bpp() const { return measure_bpp(bytes.size(), points); }

CodedStream write_stream(const StreamContents& c) {
  const std::size_t n = c.size();
  if (n == 0) throw std::invalid_argument("cannot encode an empty cloud");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("too many points for the stream format");
  if (c.graph.k() > 255) throw std::invalid_argument("k_n must fit in one byte");
  if (c.graph.size() != n && !(n == 1 && c.graph.size() == 0))
    throw std::invalid_argument("graph size does not match the visibility mask");
  if (c.deltas.q.size() != n) throw std::invalid_argument("quantized deltas do not match the point count");
  std::size_t nv = 0;
  for (auto v : c.visible) nv += v != 0;
  if (c.deltas.scale_codes.size() != nv) throw std::invalid_argument("one scale code per visible point expected");
  if (c.anchors.indices.size() != c.anchors.coords.size() || c.anchors.indices.empty())
    throw std::invalid_argument("anchor set is empty or inconsistent");
  for (std::size_t a = 0; a < c.anchors.size(); ++a)
    if (c.anchors.indices[a] >= n || (a > 0 && c.anchors.indices[a] <= c.anchors.indices[a - 1]))
      throw std::invalid_argument("anchor indices must be strictly increasing and in range");

  std::vector<std::uint8_t> anchors;
  anchors.reserve(16 * c.anchors.size());
  for (std::size_t a = 0; a < c.anchors.size(); ++a) {
    put_u32(anchors, c.anchors.indices[a]);
    for (auto v : c.anchors.coords[a]) put_u32(anchors, v);
  }
  std::vector<std::uint8_t> mask((n + 7) / 8, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (c.visible[i]) mask[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  const auto scales = code_scales(c.deltas.scale_codes);
  const auto adjacency = code_adjacency(c.graph);
  const auto deltas = code_deltas(c.deltas.q);

  CodedStream s;
  s.points = n;
  s.sections.anchors = anchors.size();
  s.sections.visibility = mask.size();
  s.sections.scales = scales.size();
  s.sections.adjacency = adjacency.size();
  s.sections.deltas = deltas.size();

  auto& out = s.bytes;
  out.reserve(s.sections.total());
  out.insert(out.end(), kStreamMagic.begin(), kStreamMagic.end());
  out.push_back(kStreamVersion);
  out.push_back(static_cast<std::uint8_t>(c.graph.k()));
  put_u32(out, static_cast<std::uint32_t>(n));
  put_u32(out, static_cast<std::uint32_t>(c.anchors.size()));
  put_u32(out, std::bit_cast<std::uint32_t>(c.deltas.s_thresh));
  for (std::size_t len : {anchors.size(), mask.size(), scales.size(), adjacency.size(), deltas.size()})
    put_u32(out, static_cast<std::uint32_t>(len));
  for (const std::vector<std::uint8_t>* sec : std::initializer_list<const std::vector<std::uint8_t>*>{&anchors, &mask, &scales, &adjacency, &deltas}) out.insert(out.end(), sec->begin(), sec->end());
  return s;
}

StreamHeader read_stream_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kStreamMagic.data(), 4) != 0)
    throw ParseError("not a SAPC stream", 0);
  if (bytes.size() < kStreamHeaderSize) throw ParseError("truncated header", bytes.size());
  if (bytes[4] != kStreamVersion)
    throw ParseError("unsupported SAPC version " + std::to_string(bytes[4]), 4);
  StreamHeader h;
  h.k = bytes[5];
  h.points = get_u32(bytes, 6);
  h.s_thresh = std::bit_cast<float>(get_u32(bytes, 14));
  h.sections.anchors = get_u32(bytes, 18);
  h.sections.visibility = get_u32(bytes, 22);
  h.sections.scales = get_u32(bytes, 26);
  h.sections.adjacency = get_u32(bytes, 30);
  h.sections.deltas = get_u32(bytes, 34);
  return h;
}

StreamContents read_stream(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kStreamMagic.data(), 4) != 0)
    throw ParseError("not a SAPC stream", 0);
  if (bytes.size() < kStreamHeaderSize) throw ParseError("truncated header", bytes.size());
  if (bytes[4] != kStreamVersion)
    throw ParseError("unsupported SAPC version " + std::to_string(bytes[4]), 4);
  const std::size_t k = bytes[5];
  const std::size_t n = get_u32(bytes, 6);
  const std::size_t k_c = get_u32(bytes, 10);
  const float s_thresh = std::bit_cast<float>(get_u32(bytes, 14));
  std::array<std::size_t, 5> len{};
  for (int s = 0; s < 5; ++s) len[s] = get_u32(bytes, 18 + 4 * s);
  if (n == 0) throw ParseError("stream declares zero points", 6);
  if (k_c == 0 || k_c > n) throw ParseError("invalid anchor count", 10);
  if (len[0] != 16 * k_c) throw ParseError("anchor section length does not match the anchor count", 18);
  if (len[1] != (n + 7) / 8) throw ParseError("visibility section length does not match the point count", 22);

  Reader r(bytes);
  r.take(kStreamHeaderSize, "header");
  StreamContents c;

  const auto anchors = r.take(len[0], "anchor");
  c.anchors.indices.resize(k_c);
  c.anchors.coords.resize(k_c);
  for (std::size_t a = 0; a < k_c; ++a) {
    c.anchors.indices[a] = get_u32(anchors, 16 * a);
    for (int d = 0; d < 3; ++d) c.anchors.coords[a][d] = get_u32(anchors, 16 * a + 4 + 4 * d);
    if (c.anchors.indices[a] >= n || (a > 0 && c.anchors.indices[a] <= c.anchors.indices[a - 1]))
      throw ParseError("anchor indices are not strictly increasing", kStreamHeaderSize + 16 * a);
  }

  const auto mask = r.take(len[1], "visibility");
  c.visible.resize(n);
  std::size_t nv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    c.visible[i] = (mask[i / 8] >> (i % 8)) & 1u;
    nv += c.visible[i];
  }

  const std::size_t scales_at = r.position();
  c.deltas.s_thresh = s_thresh;
  try {
    c.deltas.scale_codes = arithmetic_decode(r.take(len[2], "scale"), nv);
  } catch (const ParseError& e) {
    throw ParseError(std::string("scale section: ") + e.what(), scales_at);
  }
  for (auto code : c.deltas.scale_codes)
    if (code == 0) throw ParseError("zero scale code", scales_at);

  const std::size_t adjacency_at = r.position();
  if (k > 0) {
    if (k >= n) throw ParseError("k_n is not smaller than the point count", 5);
    VarintDecoder dec(r.take(len[3], "adjacency"));
    std::vector<std::uint32_t> table(n * k);
    try {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t m = 0; m < k; ++m) {
          const std::int64_t j = static_cast<std::int64_t>(i) + dec.get();
          if (j < 0 || j >= static_cast<std::int64_t>(n)) throw ParseError("neighbor index out of range", adjacency_at);
          table[i * k + m] = static_cast<std::uint32_t>(j);
        }
      c.graph = NeighborGraph(k, std::move(table));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("adjacency section: ") + e.what(), adjacency_at);
    }
  } else {
    if (n != 1) throw ParseError("k_n = 0 is only valid for a single point", 5);
    r.take(len[3], "adjacency");
  }

  const std::size_t deltas_at = r.position();
  VarintDecoder dec(r.take(len[4], "delta"));
  c.deltas.q.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int d = 0; d < 3; ++d) {
      const std::int64_t v = dec.get();
      if (v < std::numeric_limits<std::int32_t>::min() || v > std::numeric_limits<std::int32_t>::max())
        throw ParseError("quantized delta out of range", deltas_at);
      if (!c.visible[i] && v != 0) throw ParseError("non-visible point carries a delta", deltas_at);
      c.deltas.q[i][d] = static_cast<std::int32_t>(v);
    }
  if (r.position() != bytes.size()) throw ParseError("trailing bytes after the last section", r.position());
  return c;
}

}  // namespace salpcc
