#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "splatdyn/engine.hpp"
#include "splatdyn/math.hpp"
#include "splatdyn/splat.hpp"

namespace splatdyn::testing {

// One vertex record in the raw PLY layout, all float32, degree 1.
struct RawSplat {
  float pos[3];
  float normal[3];
  float f_dc[3];
  float f_rest[9];  // channel-major: 3 coefficients of R, then G, then B
  float opacity;    // logit
  float scale[3];   // log
  float rot[4];     // w x y z
};

// The three records of the round-trip fixture. Values are chosen to be
// representable round trips (unit quaternions, moderate logits).
std::vector<RawSplat> three_splat_records();

// Assembles a binary little-endian PLY from raw records, written byte by
// byte here rather than through the library.
std::vector<std::uint8_t> assemble_ply(const std::vector<RawSplat>& records, bool with_normals = true);

// Header-only helper for malformed-input tests.
std::vector<std::uint8_t> bytes_of(const std::string& text);

// n^3 splats on a regular lattice filling [lo, lo + side]^3, degree 0,
// isotropic scale of 0.6 lattice spacings, uniform color.
GaussianCloud cube_cloud(int n_per_axis, const Vec3& lo, double side, double opacity = 0.9,
                         const Vec3& rgb = Vec3(0.8, 0.3, 0.2));

// Per-test scratch directory under the system temp dir, emptied on
// creation.
std::filesystem::path scratch_dir(const std::string& name);

void write_text(const std::filesystem::path& path, const std::string& text);

// Uniform double in [lo, hi).
double uniform(std::mt19937_64& rng, double lo, double hi);
Vec3 uniform_vec(std::mt19937_64& rng, double lo, double hi);
Mat3 random_rotation(std::mt19937_64& rng);
// Random deformation gradient R1 diag(s) R2 with det(F) uniform in
// [det_lo, det_hi] and moderate anisotropy.
Mat3 random_deformation(std::mt19937_64& rng, double det_lo, double det_hi);

}  // namespace splatdyn::testing
