#include "splatdyn/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "splatdyn/error.hpp"

namespace splatdyn {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
  return f;
}

[[noreturn]] void png_error_handler(png_structp, png_const_charp msg) { throw IoError(std::string("libpng: ") + msg); }
void png_warning_handler(png_structp, png_const_charp) {}

}  // namespace

Rgb8Image quantize(const Image& image) {
  if (image.width <= 0 || image.height <= 0) throw IoError("cannot encode an empty image");
  Rgb8Image out{image.width, image.height, {}};
  out.data.resize(static_cast<std::size_t>(image.width) * image.height * 3);
  for (std::size_t i = 0; i < image.pixels.size(); ++i)
    for (int c = 0; c < 3; ++c) {
      const double v = std::clamp(image.pixels[i][c], 0.0, 1.0);
      out.data[3 * i + c] = static_cast<std::uint8_t>(std::lround(255.0 * (std::isnan(v) ? 0.0 : v)));
    }
  return out;
}

void write_png(const Image& image, const std::filesystem::path& path) {
  const Rgb8Image rgb = quantize(image);
  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler, png_warning_handler);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_write_struct(png, info); }
  } guard{&png, &info};
  if (!info) throw IoError("png_create_info_struct failed");

  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(rgb.width), static_cast<png_uint_32>(rgb.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < rgb.height; ++y)
    png_write_row(png, rgb.data.data() + static_cast<std::size_t>(y) * rgb.width * 3);
  png_write_end(png, nullptr);
  if (std::fflush(file.get()) != 0 || std::ferror(file.get()))
    throw IoError("write failed for '" + path.string() + "': " + std::strerror(errno));
}

void write_ppm(const Image& image, const std::filesystem::path& path) {
  const Rgb8Image rgb = quantize(image);
  FilePtr file = open_file(path, "wb");
  std::fprintf(file.get(), "P6\n%d %d\n255\n", rgb.width, rgb.height);
  std::fwrite(rgb.data.data(), 1, rgb.data.size(), file.get());
  if (std::fflush(file.get()) != 0 || std::ferror(file.get()))
    throw IoError("write failed for '" + path.string() + "': " + std::strerror(errno));
}

void write_image(const Image& image, const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".png") return write_png(image, path);
  if (ext == ".ppm") return write_ppm(image, path);
  throw IoError("unsupported image extension '" + ext + "' (use .png or .ppm)");
}

Rgb8Image read_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler, png_warning_handler);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_read_struct(png, info, nullptr); }
  } guard{&png, &info};
  if (!info) throw IoError("png_create_info_struct failed");

  png_init_io(png, file.get());
  png_read_info(png, info);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_palette_to_rgb(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  Rgb8Image out;
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  if (png_get_rowbytes(png, info) != static_cast<std::size_t>(out.width) * 3)
    throw IoError("unexpected PNG layout in '" + path.string() + "'");
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * 3);
  for (int y = 0; y < out.height; ++y) png_read_row(png, out.data.data() + static_cast<std::size_t>(y) * out.width * 3, nullptr);
  png_read_end(png, nullptr);
  return out;
}

Rgb8Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
  auto token = [&]() {
    std::string t;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!t.empty()) break;
        continue;
      }
      t.push_back(c);
    }
    return t;
  };
  if (token() != "P6") throw IoError("'" + path.string() + "' is not a binary PPM");
  Rgb8Image out;
  try {
    out.width = std::stoi(token());
    out.height = std::stoi(token());
    if (std::stoi(token()) != 255) throw IoError("only 8-bit PPM is supported");
  } catch (const std::logic_error&) {
    throw IoError("malformed PPM header in '" + path.string() + "'");
  }
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * 3);
  in.read(reinterpret_cast<char*>(out.data.data()), static_cast<std::streamsize>(out.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(out.data.size())) throw IoError("truncated PPM '" + path.string() + "'");
  return out;
}

}  // namespace splatdyn
