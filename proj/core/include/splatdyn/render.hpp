#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "splatdyn/camera.hpp"
#include "splatdyn/deform.hpp"
#include "splatdyn/math.hpp"

namespace splatdyn {

// Floor added to the diagonal of every screen-space covariance before
// inversion (px^2).
inline constexpr double kCov2dFloor = 0.3;
// Blending stops once transmittance falls below this.
inline constexpr double kMinTransmittance = 1e-4;
// Per-pixel contributions weaker than this are skipped.
inline constexpr double kMinAlpha = 1.0 / 255.0;
inline constexpr int kTileSize = 16;

struct Splat2D {
  Vec2 mean = Vec2::Zero();     // pixels
  Mat2 cov2d = Mat2::Zero();    // EWA footprint J W Sigma W^T J^T, px^2
  Mat2 conic = Mat2::Zero();    // (cov2d + floor I)^-1
  double depth = 0.0;           // camera z, m
  Vec3 color = Vec3::Zero();
  double opacity = 0.0;
  std::uint32_t index = 0;      // splat index, depth tie-break
};

// Perspective projection with first-order covariance transport. Splats at
// or in front of the near plane are culled.
std::vector<Splat2D> project(const DeformedSnapshot& snapshot, const Camera& camera);

// Linear RGB image, row-major, top row first.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Vec3> pixels;

  Image() = default;
  Image(int w, int h, const Vec3& fill = Vec3::Zero())
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}
  Vec3& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  const Vec3& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Front-to-back depth order (ties by splat index).
std::vector<Splat2D> sort_by_depth(std::span<const Splat2D> splats);

// Tile-based compositing over 16x16 tiles; parallel over tiles.
Image rasterize(std::span<const Splat2D> splats, const Camera& camera, const Vec3& background, int threads = 1);

// Per-pixel loop over the whole sorted list. Same arithmetic as
// rasterize(); kept as the reference for it.
Image rasterize_reference(std::span<const Splat2D> splats, const Camera& camera, const Vec3& background);

// Evaluated effective alpha of one splat at a pixel-space point.
double splat_alpha(const Splat2D& s, const Vec2& point);

}  // namespace splatdyn
