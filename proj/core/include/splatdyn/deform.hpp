#pragma once

#include <span>
#include <vector>

#include "splatdyn/engine.hpp"
#include "splatdyn/math.hpp"
#include "splatdyn/splat.hpp"

namespace splatdyn {

// Renderable state of the cloud at one instant, indexed by splat.
struct DeformedSnapshot {
  std::vector<Vec3> positions;
  std::vector<Mat3> covariances;
  std::vector<double> opacities;
  std::vector<Vec3> colors;  // regularized, in [0,1]^3

  std::size_t size() const noexcept { return positions.size(); }
};

// F Sigma F^T, symmetrized.
Mat3 deform_covariance(const Mat3& sigma, const Mat3& F);

// Rescales the whole tensor by its global min/max when any value leaves
// [0,1], then clamps to [0,1]. In-range input is returned unchanged.
// Throws NumericError on non-finite input.
std::vector<Vec3> regularize_colors(std::span<const Vec3> colors);

// Colors evaluated toward one shared view direction.
DeformedSnapshot snapshot(std::span<const Particle> particles, const GaussianCloud& cloud, const Vec3& view_dir);
// Colors evaluated per splat toward the direction eye -> splat.
DeformedSnapshot snapshot_from_eye(std::span<const Particle> particles, const GaussianCloud& cloud,
                                   const Vec3& eye);
// The undeformed cloud (F = I, original positions), colored from `eye`.
DeformedSnapshot static_snapshot(const GaussianCloud& cloud, const Vec3& eye);

}  // namespace splatdyn
