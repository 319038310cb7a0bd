#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "splatdyn/render.hpp"

namespace splatdyn {

// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  bool operator==(const Rgb8Image&) const = default;
};

// round(255 * clamp(v, 0, 1)) per channel.
Rgb8Image quantize(const Image& image);

enum class ImageFormat { Png, Ppm };

void write_png(const Image& image, const std::filesystem::path& path);
void write_ppm(const Image& image, const std::filesystem::path& path);
// Format from the extension (.png / .ppm). Throws IoError on failure with
// the OS reason, and for other extensions.
void write_image(const Image& image, const std::filesystem::path& path);

Rgb8Image read_png(const std::filesystem::path& path);
Rgb8Image read_ppm(const std::filesystem::path& path);

}  // namespace splatdyn
