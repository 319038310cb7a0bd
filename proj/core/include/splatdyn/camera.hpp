#pragma once

#include "splatdyn/math.hpp"

namespace splatdyn {

// Pinhole camera, OpenCV convention: camera x right, y down, z forward.
// Image coordinates are continuous with the image spanning [0,w]x[0,h];
// pixel (u,v) is sampled at its center (u + 0.5, v + 0.5).
struct Camera {
  double fx = 1.0, fy = 1.0;  // pixels
  double cx = 0.0, cy = 0.0;  // pixels
  Mat3 rotation = Mat3::Identity();      // world -> camera
  Vec3 translation = Vec3::Zero();       // world -> camera
  int width = 1, height = 1;
  double near_clip = 0.01;               // m

  Vec3 to_camera(const Vec3& world) const { return rotation * world + translation; }
  // Camera center in world coordinates.
  Vec3 center() const { return -rotation.transpose() * translation; }

  // Throws ConfigError when intrinsics or the rotation block are invalid.
  void validate() const;

  // Camera at `eye` looking at `target`; fy from the vertical field of
  // view, fx = fy, principal point at the image center.
  static Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double fov_y_deg, int width,
                        int height, double near_clip = 0.01);
};

}  // namespace splatdyn
