#include "splatdyn/splat.hpp"

#include <cmath>
#include <string>

#include "splatdyn/error.hpp"

namespace splatdyn {

int GaussianSplat::sh_degree() const {
  const std::size_t per_channel = sh.size() / 3;
  for (int d = 0; d <= kMaxShDegree; ++d)
    if (static_cast<std::size_t>(sh_coeffs_per_channel(d)) == per_channel && sh.size() % 3 == 0)
      return d;
  return -1;
}

void GaussianCloud::validate() const {
  if (sh_degree < 0 || sh_degree > kMaxShDegree)
    throw RangeError("sh_degree " + std::to_string(sh_degree) + " outside [0, 3]");
  const std::size_t want = 3 * static_cast<std::size_t>(sh_coeffs_per_channel(sh_degree));
  for (std::size_t i = 0; i < splats.size(); ++i) {
    const auto& s = splats[i];
    const std::string tag = "splat " + std::to_string(i) + ": ";
    if (s.sh.size() != want) throw RangeError(tag + "sh coefficient count does not match sh_degree");
    if (std::abs(s.rotation.norm() - 1.0) > 1e-6) throw RangeError(tag + "rotation is not unit length");
    if (!(s.scale.array() > 0.0).all()) throw RangeError(tag + "scale must be positive");
    if (!(s.opacity > 0.0 && s.opacity < 1.0)) throw RangeError(tag + "opacity must lie in (0, 1)");
    if (!s.position.allFinite()) throw RangeError(tag + "non-finite position");
  }
}

std::pair<Vec3, Vec3> GaussianCloud::bounds() const {
  if (splats.empty()) return {Vec3::Zero(), Vec3::Zero()};
  Vec3 lo = splats.front().position, hi = lo;
  for (const auto& s : splats) {
    lo = lo.cwiseMin(s.position);
    hi = hi.cwiseMax(s.position);
  }
  return {lo, hi};
}

Mat3 covariance(const GaussianSplat& splat) {
  const Mat3 m = splat.rotation.toRotationMatrix() * splat.scale.asDiagonal();
  return symmetrized(m * m.transpose());
}

Vec3 sh_to_rgb(const GaussianSplat& splat, const Vec3& view_dir) {
  const auto& sh = splat.sh;
  auto coeff = [&](int k) { return Vec3(sh[3 * k], sh[3 * k + 1], sh[3 * k + 2]); };
  const int degree = splat.sh_degree();

  Vec3 rgb = kShC0 * coeff(0);
  if (degree >= 1) {
    const double x = view_dir.x(), y = view_dir.y(), z = view_dir.z();
    rgb += -kShC1 * y * coeff(1) + kShC1 * z * coeff(2) - kShC1 * x * coeff(3);
    if (degree >= 2) {
      const double xx = x * x, yy = y * y, zz = z * z;
      const double xy = x * y, yz = y * z, xz = x * z;
      rgb += kShC2[0] * xy * coeff(4) + kShC2[1] * yz * coeff(5) +
             kShC2[2] * (2.0 * zz - xx - yy) * coeff(6) + kShC2[3] * xz * coeff(7) +
             kShC2[4] * (xx - yy) * coeff(8);
      if (degree >= 3) {
        rgb += kShC3[0] * y * (3.0 * xx - yy) * coeff(9) + kShC3[1] * xy * z * coeff(10) +
               kShC3[2] * y * (4.0 * zz - xx - yy) * coeff(11) +
               kShC3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy) * coeff(12) +
               kShC3[4] * x * (4.0 * zz - xx - yy) * coeff(13) +
               kShC3[5] * z * (xx - yy) * coeff(14) + kShC3[6] * x * (xx - 3.0 * yy) * coeff(15);
      }
    }
  }
  return rgb + Vec3::Constant(0.5);
}

}  // namespace splatdyn
