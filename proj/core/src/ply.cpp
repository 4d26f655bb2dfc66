#include "salpcc/ply.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

#include "salpcc/errors.hpp"

namespace salpcc {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary PLY I/O assumes a little-endian host");

enum class ScalarType { kInt8, kUInt8, kInt16, kUInt16, kInt32, kUInt32, kFloat32, kFloat64 };

std::optional<ScalarType> parse_type(std::string_view name) {
  if (name == "char" || name == "int8") return ScalarType::kInt8;
  if (name == "uchar" || name == "uint8") return ScalarType::kUInt8;
  if (name == "short" || name == "int16") return ScalarType::kInt16;
  if (name == "ushort" || name == "uint16") return ScalarType::kUInt16;
  if (name == "int" || name == "int32") return ScalarType::kInt32;
  if (name == "uint" || name == "uint32") return ScalarType::kUInt32;
  if (name == "float" || name == "float32") return ScalarType::kFloat32;
  if (name == "double" || name == "float64") return ScalarType::kFloat64;
  return std::nullopt;
}

std::size_t type_size(ScalarType t) {
  switch (t) {
    case ScalarType::kInt8:
    case ScalarType::kUInt8: return 1;
    case ScalarType::kInt16:
    case ScalarType::kUInt16: return 2;
    case ScalarType::kInt32:
    case ScalarType::kUInt32:
    case ScalarType::kFloat32: return 4;
    case ScalarType::kFloat64: return 8;
  }
  return 0;
}

template <typename T>
T read_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

double read_scalar(ScalarType t, const char* p) {
  switch (t) {
    case ScalarType::kInt8: return read_le<std::int8_t>(p);
    case ScalarType::kUInt8: return read_le<std::uint8_t>(p);
    case ScalarType::kInt16: return read_le<std::int16_t>(p);
    case ScalarType::kUInt16: return read_le<std::uint16_t>(p);
    case ScalarType::kInt32: return read_le<std::int32_t>(p);
    case ScalarType::kUInt32: return read_le<std::uint32_t>(p);
    case ScalarType::kFloat32: return read_le<float>(p);
    case ScalarType::kFloat64: return read_le<double>(p);
  }
  return 0.0;
}

struct Property {
  std::string name;
  ScalarType type = ScalarType::kFloat32;
  bool is_list = false;
};

struct Element {
  std::string name;
  std::uint64_t count = 0;
  std::vector<Property> properties;
  std::uint64_t offset = 0;  // header offset of the element line
};

enum class Format { kAscii, kBinaryLittleEndian };

struct Header {
  Format format = Format::kAscii;
  std::vector<Element> elements;
  std::size_t data_offset = 0;
};

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

Header parse_header(std::string_view text) {
  Header header;
  std::size_t pos = 0;
  bool saw_format = false;
  bool first = true;
  while (true) {
    if (pos >= text.size()) throw ParseError("PLY header is missing end_header", pos);
    const std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) throw ParseError("PLY header is missing end_header", pos);
    const std::string_view line = text.substr(pos, eol - pos);
    const auto words = split_words(line);
    const std::size_t line_offset = pos;
    pos = eol + 1;

    if (first) {
      if (words.size() != 1 || words[0] != "ply") throw ParseError("missing PLY magic", 0);
      first = false;
      continue;
    }
    if (words.empty()) continue;
    const std::string_view key = words[0];
    if (key == "comment" || key == "obj_info") continue;
    if (key == "end_header") {
      if (!saw_format) throw ParseError("PLY header has no format line", line_offset);
      header.data_offset = pos;
      return header;
    }
    if (key == "format") {
      if (words.size() != 3) throw ParseError("malformed format line", line_offset);
      if (words[1] == "ascii")
        header.format = Format::kAscii;
      else if (words[1] == "binary_little_endian")
        header.format = Format::kBinaryLittleEndian;
      else
        throw ParseError("unsupported PLY format '" + std::string(words[1]) + "'", line_offset);
      if (words[2] != "1.0") throw ParseError("unsupported PLY version", line_offset);
      saw_format = true;
    } else if (key == "element") {
      if (words.size() != 3) throw ParseError("malformed element line", line_offset);
      Element e;
      e.name = std::string(words[1]);
      e.offset = line_offset;
      const auto* b = words[2].data();
      const auto [ptr, ec] = std::from_chars(b, b + words[2].size(), e.count);
      if (ec != std::errc() || ptr != b + words[2].size())
        throw ParseError("malformed element count", line_offset);
      header.elements.push_back(std::move(e));
    } else if (key == "property") {
      if (header.elements.empty()) throw ParseError("property before any element", line_offset);
      Property p;
      if (words.size() == 5 && words[1] == "list") {
        const auto count_type = parse_type(words[2]);
        const auto item_type = parse_type(words[3]);
        if (!count_type || !item_type)
          throw ParseError("unsupported property type in list", line_offset);
        p.is_list = true;
        p.type = *item_type;
        p.name = std::string(words[4]);
      } else if (words.size() == 3) {
        const auto t = parse_type(words[1]);
        if (!t) throw ParseError("unsupported property type '" + std::string(words[1]) + "'", line_offset);
        p.type = *t;
        p.name = std::string(words[2]);
      } else {
        throw ParseError("malformed property line", line_offset);
      }
      header.elements.back().properties.push_back(std::move(p));
    } else {
      throw ParseError("unknown PLY header keyword '" + std::string(key) + "'", line_offset);
    }
  }
}

struct VertexLayout {
  int x = -1, y = -1, z = -1, r = -1, g = -1, b = -1;
};

VertexLayout vertex_layout(const Element& e) {
  VertexLayout l;
  for (int i = 0; i < static_cast<int>(e.properties.size()); ++i) {
    const auto& p = e.properties[i];
    if (p.is_list) throw ParseError("list property '" + p.name + "' on vertex element", e.offset);
    if (p.name == "x") l.x = i;
    if (p.name == "y") l.y = i;
    if (p.name == "z") l.z = i;
    if (p.name == "red") l.r = i;
    if (p.name == "green") l.g = i;
    if (p.name == "blue") l.b = i;
  }
  if (l.x < 0 || l.y < 0 || l.z < 0) throw ParseError("vertex element lacks x, y or z", e.offset);
  const bool colored = l.r >= 0 && l.g >= 0 && l.b >= 0;
  if (colored) {
    for (int c : {l.r, l.g, l.b})
      if (e.properties[c].type != ScalarType::kUInt8)
        throw ParseError("color properties must be uchar", e.offset);
  } else {
    l.r = l.g = l.b = -1;
  }
  return l;
}

PointCloud read_vertices_binary(std::span<const char> bytes, std::size_t offset, const Element& e,
                                const VertexLayout& l) {
  std::vector<std::size_t> field_offset(e.properties.size());
  std::size_t stride = 0;
  for (std::size_t i = 0; i < e.properties.size(); ++i) {
    field_offset[i] = stride;
    stride += type_size(e.properties[i].type);
  }
  PointCloud pc;
  pc.vertices.resize(e.count);
  if (l.r >= 0) pc.colors.resize(e.count);
  for (std::uint64_t v = 0; v < e.count; ++v) {
    if (offset + stride > bytes.size()) throw ParseError("truncated vertex payload", bytes.size());
    const char* row = bytes.data() + offset;
    pc.vertices[v] = Vec3(read_scalar(e.properties[l.x].type, row + field_offset[l.x]),
                          read_scalar(e.properties[l.y].type, row + field_offset[l.y]),
                          read_scalar(e.properties[l.z].type, row + field_offset[l.z]));
    if (l.r >= 0)
      pc.colors[v] = {static_cast<std::uint8_t>(row[field_offset[l.r]]),
                      static_cast<std::uint8_t>(row[field_offset[l.g]]),
                      static_cast<std::uint8_t>(row[field_offset[l.b]])};
    offset += stride;
  }
  return pc;
}

// Skips the payload of a non-vertex element preceding the vertices.
std::size_t skip_element(std::span<const char> bytes, std::size_t offset, const Element& e,
                         Format format) {
  if (format == Format::kAscii) {
    for (std::uint64_t i = 0; i < e.count; ++i) {
      const auto* begin = bytes.data() + offset;
      const auto* nl = static_cast<const char*>(std::memchr(begin, '\n', bytes.size() - offset));
      if (!nl) throw ParseError("truncated payload in element '" + e.name + "'", bytes.size());
      offset = static_cast<std::size_t>(nl - bytes.data()) + 1;
    }
    return offset;
  }
  for (const auto& p : e.properties)
    if (p.is_list)
      throw ParseError("list element '" + e.name + "' before vertex element is not supported", e.offset);
  std::size_t stride = 0;
  for (const auto& p : e.properties) stride += type_size(p.type);
  if (offset + stride * e.count > bytes.size())
    throw ParseError("truncated payload in element '" + e.name + "'", bytes.size());
  return offset + stride * e.count;
}

PointCloud read_vertices_ascii(std::span<const char> bytes, std::size_t offset, const Element& e,
                               const VertexLayout& l) {
  PointCloud pc;
  pc.vertices.resize(e.count);
  if (l.r >= 0) pc.colors.resize(e.count);
  std::vector<double> values(e.properties.size());
  const char* end = bytes.data() + bytes.size();
  const char* p = bytes.data() + offset;
  for (std::uint64_t v = 0; v < e.count; ++v) {
    for (std::size_t f = 0; f < values.size(); ++f) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == '\n')) ++p;
      if (p >= end) throw ParseError("truncated vertex payload", bytes.size());
      const auto [next, ec] = std::from_chars(p, end, values[f]);
      if (ec != std::errc())
        throw ParseError("malformed number in vertex payload", static_cast<std::uint64_t>(p - bytes.data()));
      p = next;
    }
    pc.vertices[v] = Vec3(values[l.x], values[l.y], values[l.z]);
    if (l.r >= 0)
      pc.colors[v] = {static_cast<std::uint8_t>(values[l.r]), static_cast<std::uint8_t>(values[l.g]),
                      static_cast<std::uint8_t>(values[l.b])};
  }
  return pc;
}

bool float_exact(double v) { return static_cast<double>(static_cast<float>(v)) == v; }

}  // namespace

PointCloud parse_ply(std::span<const char> bytes) {
  const Header header = parse_header(std::string_view(bytes.data(), bytes.size()));
  std::size_t offset = header.data_offset;
  for (const Element& e : header.elements) {
    if (e.name != "vertex") {
      offset = skip_element(bytes, offset, e, header.format);
      continue;
    }
    const VertexLayout layout = vertex_layout(e);
    return header.format == Format::kAscii ? read_vertices_ascii(bytes, offset, e, layout)
                                           : read_vertices_binary(bytes, offset, e, layout);
  }
  throw ParseError("PLY file has no vertex element", header.data_offset);
}

PointCloud load_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_ply(bytes);
}

void save_ply(const PointCloud& pc, const std::filesystem::path& path, PlyMode mode) {
  if (pc.has_colors() && pc.colors.size() != pc.size())
    throw std::invalid_argument("color count does not match vertex count");
  bool single = true;
  for (const Vec3& v : pc.vertices)
    single = single && float_exact(v.x()) && float_exact(v.y()) && float_exact(v.z());
  const char* type = single ? "float" : "double";

  std::ostringstream head;
  head << "ply\n"
       << "format " << (mode == PlyMode::kAscii ? "ascii" : "binary_little_endian") << " 1.0\n"
       << "element vertex " << pc.size() << "\n"
       << "property " << type << " x\n"
       << "property " << type << " y\n"
       << "property " << type << " z\n";
  if (pc.has_colors()) head << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  head << "end_header\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  const std::string h = head.str();
  out.write(h.data(), static_cast<std::streamsize>(h.size()));

  if (mode == PlyMode::kAscii) {
    char buf[128];
    for (std::size_t i = 0; i < pc.size(); ++i) {
      const Vec3& v = pc.vertices[i];
      int len = single ? std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g", v.x(), v.y(), v.z())
                       : std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", v.x(), v.y(), v.z());
      out.write(buf, len);
      if (pc.has_colors()) {
        len = std::snprintf(buf, sizeof buf, " %u %u %u", pc.colors[i][0], pc.colors[i][1], pc.colors[i][2]);
        out.write(buf, len);
      }
      out.put('\n');
    }
  } else {
    std::vector<char> row;
    for (std::size_t i = 0; i < pc.size(); ++i) {
      row.clear();
      for (int d = 0; d < 3; ++d) {
        if (single) {
          const float f = static_cast<float>(pc.vertices[i][d]);
          const auto* p = reinterpret_cast<const char*>(&f);
          row.insert(row.end(), p, p + sizeof f);
        } else {
          const double f = pc.vertices[i][d];
          const auto* p = reinterpret_cast<const char*>(&f);
          row.insert(row.end(), p, p + sizeof f);
        }
      }
      if (pc.has_colors())
        for (auto c : pc.colors[i]) row.push_back(static_cast<char>(c));
      out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
  }
  if (!out) throw DataError("I/O error while writing '" + path.string() + "'");
}

}  // namespace salpcc
