#include "splatdyn/deform.hpp"

#include <algorithm>
#include <string>

#include "splatdyn/error.hpp"

namespace splatdyn {
namespace {

template <typename DirectionFor>
DeformedSnapshot build(std::span<const Particle> particles, const GaussianCloud& cloud, DirectionFor&& dir_for) {
  const std::size_t n = cloud.count();
  if (particles.size() != n)
    throw ConsistencyError("snapshot: " + std::to_string(particles.size()) + " particles for " + std::to_string(n) +
                           " splats");
  DeformedSnapshot out;
  out.positions.resize(n);
  out.covariances.resize(n);
  out.opacities.resize(n);
  std::vector<Vec3> raw(n);
  std::vector<bool> seen(n, false);
  for (std::size_t p = 0; p < n; ++p) {
    const Particle& pt = particles[p];
    const std::size_t s = pt.splat_index;
    if (s >= n || seen[s])
      throw ConsistencyError("snapshot: particle " + std::to_string(p) + " has invalid or duplicate splat_index " +
                             std::to_string(s));
    seen[s] = true;
    const GaussianSplat& splat = cloud.splats[s];
    out.positions[s] = pt.x;
    out.covariances[s] = deform_covariance(covariance(splat), pt.F);
    out.opacities[s] = splat.opacity;
    raw[s] = sh_to_rgb(splat, dir_for(pt.x));
  }
  out.colors = regularize_colors(raw);
  return out;
}

Vec3 direction_or_forward(const Vec3& d) {
  const double n = d.norm();
  return n > 0.0 ? Vec3(d / n) : Vec3::UnitZ();
}

}  // namespace

Mat3 deform_covariance(const Mat3& sigma, const Mat3& F) { return symmetrized(F * sigma * F.transpose()); }

std::vector<Vec3> regularize_colors(std::span<const Vec3> colors) {
  std::vector<Vec3> out(colors.begin(), colors.end());
  if (out.empty()) return out;
  double lo = out.front()[0], hi = lo;
  for (const auto& c : out) {
    if (!c.allFinite()) throw NumericError("regularize_colors: non-finite color value");
    lo = std::min(lo, c.minCoeff());
    hi = std::max(hi, c.maxCoeff());
  }
  if ((lo < 0.0 || hi > 1.0) && hi > lo) {
    const double range = hi - lo;
    for (auto& c : out) c = (c.array() - lo) / range;
  }
  for (auto& c : out) c = c.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

DeformedSnapshot snapshot(std::span<const Particle> particles, const GaussianCloud& cloud, const Vec3& view_dir) {
  const Vec3 dir = direction_or_forward(view_dir);
  return build(particles, cloud, [&](const Vec3&) { return dir; });
}

DeformedSnapshot snapshot_from_eye(std::span<const Particle> particles, const GaussianCloud& cloud,
                                   const Vec3& eye) {
  return build(particles, cloud, [&](const Vec3& x) { return direction_or_forward(x - eye); });
}

DeformedSnapshot static_snapshot(const GaussianCloud& cloud, const Vec3& eye) {
  std::vector<Particle> rest(cloud.count());
  for (std::size_t i = 0; i < cloud.count(); ++i) {
    rest[i].x = cloud.splats[i].position;
    rest[i].splat_index = static_cast<std::uint32_t>(i);
  }
  return snapshot_from_eye(rest, cloud, eye);
}

}  // namespace splatdyn
