#include "splatdyn/camera.hpp"

#include <cmath>
#include <numbers>

#include "splatdyn/error.hpp"

namespace splatdyn {

void Camera::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw ConfigError("camera focal lengths must be positive");
  if (width < 1 || height < 1) throw ConfigError("camera image size must be positive");
  if (!(near_clip > 0.0)) throw ConfigError("camera near clip must be positive");
  if (!rotation.allFinite() || !translation.allFinite()) throw ConfigError("camera pose must be finite");
  if (!(rotation * rotation.transpose()).isApprox(Mat3::Identity(), 1e-8) || rotation.determinant() < 0.0)
    throw ConfigError("camera rotation must be orthonormal");
}

Camera Camera::look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double fov_y_deg, int width,
                       int height, double near_clip) {
  const Vec3 forward = (target - eye).normalized();
  const Vec3 right = forward.cross(up).normalized();
  if (!forward.allFinite() || !right.allFinite())
    throw ConfigError("camera look-at is degenerate (eye == target or up parallel to view)");
  const Vec3 down = forward.cross(right);
  Camera cam;
  cam.rotation.row(0) = right;
  cam.rotation.row(1) = down;
  cam.rotation.row(2) = forward;
  cam.translation = -cam.rotation * eye;
  cam.width = width;
  cam.height = height;
  cam.fy = 0.5 * height / std::tan(0.5 * fov_y_deg * std::numbers::pi / 180.0);
  cam.fx = cam.fy;
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  cam.near_clip = near_clip;
  return cam;
}

}  // namespace splatdyn
