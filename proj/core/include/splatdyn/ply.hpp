#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "splatdyn/splat.hpp"

namespace splatdyn {

// Binary little-endian PLY in the common splat-asset layout:
//   x y z [nx ny nz] f_dc_0..2 f_rest_0..N opacity scale_0..2 rot_0..3
// Stored opacity is a logit, stored scale is a log, rot is (w,x,y,z)
// and may be unnormalized. See docs/formats.md.
GaussianCloud load_ply(std::span<const std::uint8_t> bytes);
GaussianCloud load_ply_file(const std::filesystem::path& path);

// Writes the canonical layout (float32 properties, zero normals).
std::vector<std::uint8_t> save_ply(const GaussianCloud& cloud);
void save_ply_file(const GaussianCloud& cloud, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace splatdyn
