#include "splatdyn/render.hpp"

#include <algorithm>
#include <cmath>

#include "splatdyn/parallel.hpp"

namespace splatdyn {
namespace {

// Composites `list` (already front-to-back) at one pixel center.
Vec3 composite(std::span<const Splat2D* const> list, const Vec2& p, const Vec3& background) {
  Vec3 color = Vec3::Zero();
  double transmittance = 1.0;
  for (const Splat2D* s : list) {
    const double alpha = splat_alpha(*s, p);
    if (alpha < kMinAlpha) continue;
    color += s->color * (alpha * transmittance);
    transmittance *= 1.0 - alpha;
    if (transmittance < kMinTransmittance) break;
  }
  return color + transmittance * background;
}

Vec2 pixel_center(int u, int v) { return Vec2(u + 0.5, v + 0.5); }

// Pixel-space radius outside of which alpha < kMinAlpha, plus a pixel of
// slack for rounding.
double cutoff_radius(const Splat2D& s) {
  if (!(s.opacity * 255.0 > 1.0)) return -1.0;
  const Mat2 cov = s.cov2d + kCov2dFloor * Mat2::Identity();
  const double mid = 0.5 * (cov(0, 0) + cov(1, 1));
  const double half = 0.5 * (cov(0, 0) - cov(1, 1));
  const double lambda_max = mid + std::sqrt(half * half + cov(0, 1) * cov(0, 1));
  return std::sqrt(2.0 * lambda_max * std::log(255.0 * s.opacity)) + 1.0;
}

}  // namespace

double splat_alpha(const Splat2D& s, const Vec2& point) {
  const Vec2 d = point - s.mean;
  const double q = s.conic(0, 0) * d.x() * d.x() + 2.0 * s.conic(0, 1) * d.x() * d.y() + s.conic(1, 1) * d.y() * d.y();
  return s.opacity * std::exp(-0.5 * q);
}

std::vector<Splat2D> project(const DeformedSnapshot& snapshot, const Camera& camera) {
  std::vector<Splat2D> out;
  out.reserve(snapshot.size());
  for (std::size_t i = 0; i < snapshot.size(); ++i) {
    const Vec3 pc = camera.to_camera(snapshot.positions[i]);
    const double z = pc.z();
    if (!(z > camera.near_clip)) continue;
    Splat2D s;
    s.mean = Vec2(camera.fx * pc.x() / z + camera.cx, camera.fy * pc.y() / z + camera.cy);
    Eigen::Matrix<double, 2, 3> J;
    J << camera.fx / z, 0.0, -camera.fx * pc.x() / (z * z),
         0.0, camera.fy / z, -camera.fy * pc.y() / (z * z);
    const Mat3 cov_cam = camera.rotation * snapshot.covariances[i] * camera.rotation.transpose();
    const Mat2 cov2d = J * cov_cam * J.transpose();
    s.cov2d = 0.5 * (cov2d + cov2d.transpose());
    const Mat2 floored = s.cov2d + kCov2dFloor * Mat2::Identity();
    const double det = floored.determinant();
    if (!(det > 0.0) || !std::isfinite(det)) continue;
    s.conic << floored(1, 1) / det, -floored(0, 1) / det, -floored(1, 0) / det, floored(0, 0) / det;
    s.depth = z;
    s.color = snapshot.colors[i];
    s.opacity = snapshot.opacities[i];
    s.index = static_cast<std::uint32_t>(i);
    out.push_back(s);
  }
  return out;
}

std::vector<Splat2D> sort_by_depth(std::span<const Splat2D> splats) {
  std::vector<Splat2D> sorted(splats.begin(), splats.end());
  std::sort(sorted.begin(), sorted.end(), [](const Splat2D& a, const Splat2D& b) {
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.index < b.index;
  });
  return sorted;
}

Image rasterize(std::span<const Splat2D> splats, const Camera& camera, const Vec3& background, int threads) {
  Image image(camera.width, camera.height, background);
  const std::vector<Splat2D> sorted = sort_by_depth(splats);
  const int tiles_x = (camera.width + kTileSize - 1) / kTileSize;
  const int tiles_y = (camera.height + kTileSize - 1) / kTileSize;
  std::vector<std::vector<const Splat2D*>> tiles(static_cast<std::size_t>(tiles_x) * tiles_y);

  for (const Splat2D& s : sorted) {
    const double r = cutoff_radius(s);
    if (!(r > 0.0) || !std::isfinite(r)) continue;
    // Pixel u is sampled at u + 0.5.
    const double u0 = std::floor(s.mean.x() - r - 0.5), u1 = std::ceil(s.mean.x() + r - 0.5);
    const double v0 = std::floor(s.mean.y() - r - 0.5), v1 = std::ceil(s.mean.y() + r - 0.5);
    if (u1 < 0.0 || v1 < 0.0 || u0 > camera.width - 1 || v0 > camera.height - 1) continue;
    const int tx0 = static_cast<int>(std::max(u0, 0.0)) / kTileSize;
    const int tx1 = static_cast<int>(std::min(u1, camera.width - 1.0)) / kTileSize;
    const int ty0 = static_cast<int>(std::max(v0, 0.0)) / kTileSize;
    const int ty1 = static_cast<int>(std::min(v1, camera.height - 1.0)) / kTileSize;
    for (int ty = ty0; ty <= ty1; ++ty)
      for (int tx = tx0; tx <= tx1; ++tx) tiles[static_cast<std::size_t>(ty) * tiles_x + tx].push_back(&s);
  }

  parallel_for(tiles.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const int tx = static_cast<int>(t) % tiles_x, ty = static_cast<int>(t) / tiles_x;
      const auto& list = tiles[t];
      if (list.empty()) continue;
      for (int v = ty * kTileSize; v < std::min((ty + 1) * kTileSize, camera.height); ++v)
        for (int u = tx * kTileSize; u < std::min((tx + 1) * kTileSize, camera.width); ++u)
          image.at(u, v) = composite(list, pixel_center(u, v), background);
    }
  });
  return image;
}

Image rasterize_reference(std::span<const Splat2D> splats, const Camera& camera, const Vec3& background) {
  Image image(camera.width, camera.height, background);
  const std::vector<Splat2D> sorted = sort_by_depth(splats);
  std::vector<const Splat2D*> all;
  all.reserve(sorted.size());
  for (const auto& s : sorted) all.push_back(&s);
  for (int v = 0; v < camera.height; ++v)
    for (int u = 0; u < camera.width; ++u) image.at(u, v) = composite(all, pixel_center(u, v), background);
  return image;
}

}  // namespace splatdyn
