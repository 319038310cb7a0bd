#include "splatdyn/ply.hpp"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "splatdyn/error.hpp"

namespace splatdyn {
namespace {

enum class ScalarType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::optional<ScalarType> parse_scalar_type(std::string_view name) {
  static const std::unordered_map<std::string_view, ScalarType> kTypes = {
      {"char", ScalarType::Int8},     {"int8", ScalarType::Int8},
      {"uchar", ScalarType::UInt8},   {"uint8", ScalarType::UInt8},
      {"short", ScalarType::Int16},   {"int16", ScalarType::Int16},
      {"ushort", ScalarType::UInt16}, {"uint16", ScalarType::UInt16},
      {"int", ScalarType::Int32},     {"int32", ScalarType::Int32},
      {"uint", ScalarType::UInt32},   {"uint32", ScalarType::UInt32},
      {"float", ScalarType::Float32}, {"float32", ScalarType::Float32},
      {"double", ScalarType::Float64}, {"float64", ScalarType::Float64},
  };
  auto it = kTypes.find(name);
  if (it == kTypes.end()) return std::nullopt;
  return it->second;
}

std::size_t scalar_size(ScalarType t) {
  switch (t) {
    case ScalarType::Int8:
    case ScalarType::UInt8: return 1;
    case ScalarType::Int16:
    case ScalarType::UInt16: return 2;
    case ScalarType::Int32:
    case ScalarType::UInt32:
    case ScalarType::Float32: return 4;
    case ScalarType::Float64: return 8;
  }
  return 0;
}

template <typename T>
T load_le(const std::uint8_t* p) {
  std::uint8_t buf[sizeof(T)];
  std::memcpy(buf, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

template <typename T>
void store_le(std::vector<std::uint8_t>& out, T v) {
  std::uint8_t buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

double read_scalar(ScalarType t, const std::uint8_t* p) {
  switch (t) {
    case ScalarType::Int8: return load_le<std::int8_t>(p);
    case ScalarType::UInt8: return load_le<std::uint8_t>(p);
    case ScalarType::Int16: return load_le<std::int16_t>(p);
    case ScalarType::UInt16: return load_le<std::uint16_t>(p);
    case ScalarType::Int32: return load_le<std::int32_t>(p);
    case ScalarType::UInt32: return load_le<std::uint32_t>(p);
    case ScalarType::Float32: return load_le<float>(p);
    case ScalarType::Float64: return load_le<double>(p);
  }
  return 0.0;
}

struct Property {
  std::string name;
  ScalarType type;
  std::size_t offset;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
  std::size_t stride = 0;
};

struct Header {
  std::vector<Element> elements;
  std::size_t payload_offset = 0;
};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t parse_count(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  if (s.empty()) throw PlyParseError(line, "missing element count");
  for (char c : s) {
    if (c < '0' || c > '9') throw PlyParseError(line, "invalid element count '" + std::string(s) + "'");
    if (v > (std::numeric_limits<std::size_t>::max() - 9) / 10)
      throw PlyParseError(line, "element count overflows");
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

Header parse_header(std::span<const std::uint8_t> bytes) {
  Header h;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_format = false;
  auto next_line = [&]() -> std::optional<std::string_view> {
    if (pos >= bytes.size()) return std::nullopt;
    const auto* begin = reinterpret_cast<const char*>(bytes.data()) + pos;
    const auto* nl = static_cast<const char*>(std::memchr(begin, '\n', bytes.size() - pos));
    if (nl == nullptr) return std::nullopt;
    std::string_view line(begin, static_cast<std::size_t>(nl - begin));
    pos += line.size() + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  auto first = next_line();
  if (!first || *first != "ply") throw PlyParseError(1, "expected magic 'ply'");

  while (true) {
    auto line = next_line();
    if (!line) throw PlyParseError(line_no + 1, "header ended before 'end_header'");
    const auto tok = split_ws(*line);
    if (tok.empty()) continue;
    const auto kw = tok[0];
    if (kw == "end_header") break;
    if (kw == "comment" || kw == "obj_info") continue;
    if (kw == "format") {
      if (tok.size() != 3 || tok[1] != "binary_little_endian")
        throw PlyParseError(line_no, "unsupported format '" + std::string(*line) + "' (need binary_little_endian 1.0)");
      if (tok[2] != "1.0") throw PlyParseError(line_no, "unsupported format version '" + std::string(tok[2]) + "'");
      saw_format = true;
    } else if (kw == "element") {
      if (tok.size() != 3) throw PlyParseError(line_no, "malformed element line '" + std::string(*line) + "'");
      Element e;
      e.name = std::string(tok[1]);
      e.count = parse_count(tok[2], line_no);
      h.elements.push_back(std::move(e));
    } else if (kw == "property") {
      if (h.elements.empty()) throw PlyParseError(line_no, "property before any element");
      if (tok.size() >= 2 && tok[1] == "list")
        throw PlyParseError(line_no, "list properties are not supported");
      if (tok.size() != 3) throw PlyParseError(line_no, "malformed property line '" + std::string(*line) + "'");
      auto type = parse_scalar_type(tok[1]);
      if (!type) throw PlyParseError(line_no, "unknown property type '" + std::string(tok[1]) + "'");
      auto& e = h.elements.back();
      for (const auto& p : e.properties)
        if (p.name == tok[2]) throw PlyParseError(line_no, "duplicate property '" + std::string(tok[2]) + "'");
      e.properties.push_back(Property{std::string(tok[2]), *type, e.stride});
      e.stride += scalar_size(*type);
    } else {
      throw PlyParseError(line_no, "unexpected keyword '" + std::string(kw) + "'");
    }
  }
  if (!saw_format) throw PlyParseError(line_no, "missing 'format' line");
  h.payload_offset = pos;
  return h;
}

double sigmoid(double x) {
  double p = 1.0 / (1.0 + std::exp(-x));
  // Extreme logits saturate in double; keep opacity strictly inside (0,1).
  if (p >= 1.0) p = std::nextafter(1.0, 0.0);
  if (p <= 0.0) p = std::numeric_limits<double>::denorm_min();
  return p;
}

std::vector<std::string> canonical_property_names(int degree) {
  std::vector<std::string> names = {"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"};
  const int rest = 3 * (sh_coeffs_per_channel(degree) - 1);
  for (int i = 0; i < rest; ++i) names.push_back("f_rest_" + std::to_string(i));
  names.insert(names.end(), {"opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3"});
  return names;
}

}  // namespace

GaussianCloud load_ply(std::span<const std::uint8_t> bytes) {
  const Header h = parse_header(bytes);

  std::size_t offset = h.payload_offset;
  const Element* vertex = nullptr;
  for (const auto& e : h.elements) {
    if (e.name == "vertex") {
      vertex = &e;
      break;
    }
    offset += e.count * e.stride;
  }
  if (vertex == nullptr) throw PlySchemaError("vertex", "missing required element");

  std::unordered_map<std::string_view, const Property*> by_name;
  for (const auto& p : vertex->properties) by_name.emplace(p.name, &p);
  auto require = [&](const std::string& name) -> const Property& {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw PlySchemaError(name);
    return *it->second;
  };

  std::size_t rest_count = 0;
  while (by_name.count("f_rest_" + std::to_string(rest_count))) ++rest_count;
  int degree = -1;
  for (int d = 0; d <= kMaxShDegree; ++d)
    if (static_cast<std::size_t>(3 * (sh_coeffs_per_channel(d) - 1)) == rest_count) degree = d;
  if (degree < 0) {
    // Point at the first coefficient a complete band would need next.
    int next = 0;
    while (static_cast<std::size_t>(3 * (sh_coeffs_per_channel(next) - 1)) < rest_count) ++next;
    throw PlySchemaError("f_rest_" + std::to_string(rest_count),
                         "incomplete SH band " + std::to_string(next) + ": missing property");
  }
  const int per_channel = sh_coeffs_per_channel(degree);

  const Property* pos[3] = {&require("x"), &require("y"), &require("z")};
  const Property* dc[3] = {&require("f_dc_0"), &require("f_dc_1"), &require("f_dc_2")};
  std::vector<const Property*> rest;
  for (std::size_t i = 0; i < rest_count; ++i) rest.push_back(&require("f_rest_" + std::to_string(i)));
  const Property& opacity = require("opacity");
  const Property* scale[3] = {&require("scale_0"), &require("scale_1"), &require("scale_2")};
  const Property* rot[4] = {&require("rot_0"), &require("rot_1"), &require("rot_2"), &require("rot_3")};

  const std::size_t need = vertex->count * vertex->stride;
  if (offset > bytes.size() || bytes.size() - offset < need)
    throw PlyTruncationError("vertex payload truncated: header declares " + std::to_string(vertex->count) +
                             " vertices (" + std::to_string(need) + " bytes), file has " +
                             std::to_string(offset > bytes.size() ? 0 : bytes.size() - offset));

  GaussianCloud cloud;
  cloud.sh_degree = degree;
  cloud.splats.resize(vertex->count);
  for (std::size_t i = 0; i < vertex->count; ++i) {
    const std::uint8_t* row = bytes.data() + offset + i * vertex->stride;
    auto get = [&](const Property* p) { return read_scalar(p->type, row + p->offset); };
    auto& s = cloud.splats[i];
    s.position = Vec3(get(pos[0]), get(pos[1]), get(pos[2]));
    s.sh.assign(3 * static_cast<std::size_t>(per_channel), 0.0);
    for (int c = 0; c < 3; ++c) {
      s.sh[c] = get(dc[c]);
      // f_rest is channel-major: all coefficients of R, then G, then B.
      for (int k = 1; k < per_channel; ++k)
        s.sh[3 * k + c] = get(rest[static_cast<std::size_t>(c * (per_channel - 1) + (k - 1))]);
    }
    s.opacity = sigmoid(get(&opacity));
    for (int a = 0; a < 3; ++a) s.scale[a] = std::exp(get(scale[a]));
    Quat q(get(rot[0]), get(rot[1]), get(rot[2]), get(rot[3]));
    const double n = q.norm();
    if (!(n > 0.0) || !std::isfinite(n))
      throw RangeError("splat " + std::to_string(i) + ": rotation quaternion has zero or non-finite norm");
    q.coeffs() /= n;
    s.rotation = q;
  }
  return cloud;
}

GaussianCloud load_ply_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return load_ply(bytes);
}

std::vector<std::uint8_t> save_ply(const GaussianCloud& cloud) {
  cloud.validate();
  const auto names = canonical_property_names(cloud.sh_degree);
  std::ostringstream header;
  header << "ply\nformat binary_little_endian 1.0\nelement vertex " << cloud.count() << '\n';
  for (const auto& n : names) header << "property float " << n << '\n';
  header << "end_header\n";
  const std::string text = header.str();

  std::vector<std::uint8_t> out(text.begin(), text.end());
  out.reserve(out.size() + cloud.count() * names.size() * sizeof(float));
  const int per_channel = sh_coeffs_per_channel(cloud.sh_degree);
  auto put = [&](double v) { store_le(out, static_cast<float>(v)); };
  for (std::size_t i = 0; i < cloud.count(); ++i) {
    const auto& s = cloud.splats[i];
    if (s.opacity <= 0.0 || s.opacity >= 1.0)
      throw RangeError("splat " + std::to_string(i) + ": opacity 0 or 1 has no finite logit");
    for (int a = 0; a < 3; ++a) put(s.position[a]);
    for (int a = 0; a < 3; ++a) put(0.0);
    for (int c = 0; c < 3; ++c) put(s.sh[c]);
    for (int c = 0; c < 3; ++c)
      for (int k = 1; k < per_channel; ++k) put(s.sh[3 * k + c]);
    put(std::log(s.opacity / (1.0 - s.opacity)));
    for (int a = 0; a < 3; ++a) put(std::log(s.scale[a]));
    put(s.rotation.w());
    put(s.rotation.x());
    put(s.rotation.y());
    put(s.rotation.z());
  }
  return out;
}

void save_ply_file(const GaussianCloud& cloud, const std::filesystem::path& path) {
  write_file_bytes(path, save_ply(cloud));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "': " + std::strerror(errno));
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "': " + std::strerror(errno));
}

}  // namespace splatdyn
