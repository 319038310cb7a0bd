#include "fixtures.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace splatdyn::testing {

std::vector<RawSplat> three_splat_records() {
  std::vector<RawSplat> r(3);
  r[0] = {{0.0f, 0.0f, 0.0f}, {0, 0, 0}, {0.5f, -0.25f, 1.0f}, {0.1f, 0.2f, 0.3f, -0.1f, -0.2f, -0.3f, 0.05f, 0.0f, -0.05f},
          0.0f, {0.0f, 0.0f, 0.0f}, {1.0f, 0.0f, 0.0f, 0.0f}};
  r[1] = {{1.5f, -2.0f, 0.25f}, {0, 0, 0}, {-1.0f, 0.75f, 0.125f}, {0.0f, 0.0f, 0.0f, 0.5f, 0.25f, 0.125f, -0.5f, 1.0f, 2.0f},
          2.0f, {-1.0f, -2.0f, -3.0f}, {0.5f, 0.5f, 0.5f, 0.5f}};
  r[2] = {{-3.0f, 4.0f, 10.0f}, {0, 0, 0}, {0.0f, 0.0f, 0.0f}, {1.0f, 1.0f, 1.0f, 2.0f, 2.0f, 2.0f, 3.0f, 3.0f, 3.0f},
          -1.5f, {0.5f, -0.5f, 0.0f}, {0.0f, 0.0f, 0.0f, 1.0f}};
  return r;
}

namespace {

void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
}

}  // namespace

std::vector<std::uint8_t> assemble_ply(const std::vector<RawSplat>& records, bool with_normals) {
  std::string h = "ply\nformat binary_little_endian 1.0\nelement vertex " + std::to_string(records.size()) + "\n";
  for (const char* p : {"x", "y", "z"}) h += std::string("property float ") + p + "\n";
  if (with_normals)
    for (const char* p : {"nx", "ny", "nz"}) h += std::string("property float ") + p + "\n";
  for (int i = 0; i < 3; ++i) h += "property float f_dc_" + std::to_string(i) + "\n";
  for (int i = 0; i < 9; ++i) h += "property float f_rest_" + std::to_string(i) + "\n";
  h += "property float opacity\n";
  for (int i = 0; i < 3; ++i) h += "property float scale_" + std::to_string(i) + "\n";
  for (int i = 0; i < 4; ++i) h += "property float rot_" + std::to_string(i) + "\n";
  h += "end_header\n";

  std::vector<std::uint8_t> out(h.begin(), h.end());
  for (const auto& r : records) {
    for (float v : r.pos) put_f32(out, v);
    if (with_normals)
      for (float v : r.normal) put_f32(out, v);
    for (float v : r.f_dc) put_f32(out, v);
    for (float v : r.f_rest) put_f32(out, v);
    put_f32(out, r.opacity);
    for (float v : r.scale) put_f32(out, v);
    for (float v : r.rot) put_f32(out, v);
  }
  return out;
}

std::vector<std::uint8_t> bytes_of(const std::string& text) { return {text.begin(), text.end()}; }

GaussianCloud cube_cloud(int n, const Vec3& lo, double side, double opacity, const Vec3& rgb) {
  GaussianCloud cloud;
  cloud.sh_degree = 0;
  const double h = side / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        GaussianSplat s;
        s.position = lo + h * Vec3(i + 0.5, j + 0.5, k + 0.5);
        s.scale = Vec3::Constant(0.6 * h);
        s.opacity = opacity;
        for (int c = 0; c < 3; ++c) s.sh[c] = (rgb[c] - 0.5) / kShC0;
        cloud.splats.push_back(s);
      }
  return cloud;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "splatdyn-tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec3 uniform_vec(std::mt19937_64& rng, double lo, double hi) {
  return Vec3(uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi));
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Quat q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

Mat3 random_deformation(std::mt19937_64& rng, double det_lo, double det_hi) {
  const double det = uniform(rng, det_lo, det_hi);
  Vec3 s(std::exp(uniform(rng, -0.4, 0.4)), std::exp(uniform(rng, -0.4, 0.4)), std::exp(uniform(rng, -0.4, 0.4)));
  s *= std::cbrt(det / s.prod());
  return random_rotation(rng) * s.asDiagonal() * random_rotation(rng);
}

}  // namespace splatdyn::testing
