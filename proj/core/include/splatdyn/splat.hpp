#pragma once

#include <cstddef>
#include <vector>

#include "splatdyn/math.hpp"

namespace splatdyn {

// Real spherical-harmonic basis constants (bands 0..3).
inline constexpr double kShC0 = 0.28209479177387814;
inline constexpr double kShC1 = 0.4886025119029199;
inline constexpr double kShC2[5] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005,
                                    -1.0925484305920792, 0.5462742152960396};
inline constexpr double kShC3[7] = {-0.5900435899266435, 2.890611442640554, -0.4570457994644658,
                                    0.3731763325901154,  -0.4570457994644658, 1.445305721320277,
                                    -0.5900435899266435};
inline constexpr int kMaxShDegree = 3;

// Number of SH coefficients per color channel for a band-limited degree.
constexpr int sh_coeffs_per_channel(int degree) { return (degree + 1) * (degree + 1); }

// One anisotropic Gaussian primitive, with activations already applied
// (opacity in (0,1), positive scales, unit rotation).
struct GaussianSplat {
  Vec3 position = Vec3::Zero();
  Quat rotation = Quat::Identity();  // (w, x, y, z)
  Vec3 scale = Vec3::Ones();
  double opacity = 0.5;
  // Coefficient-major: sh[3 * k + c] is coefficient k of channel c.
  std::vector<double> sh = std::vector<double>(3, 0.0);

  int sh_degree() const;
};

struct GaussianCloud {
  std::vector<GaussianSplat> splats;
  int sh_degree = 0;

  std::size_t count() const noexcept { return splats.size(); }

  // Throws RangeError naming the first splat that breaks an invariant.
  void validate() const;
  // Axis-aligned bounds of the splat centers. Empty clouds give (0, 0).
  std::pair<Vec3, Vec3> bounds() const;
};

// R diag(scale^2) R^T, exactly symmetric.
Mat3 covariance(const GaussianSplat& splat);

// View-dependent color from the splat's SH coefficients, evaluated toward
// the unit direction `view_dir`. Not range restricted.
Vec3 sh_to_rgb(const GaussianSplat& splat, const Vec3& view_dir);

}  // namespace splatdyn
