#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace splatdyn {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

inline Mat3 symmetrized(const Mat3& m) { return 0.5 * (m + m.transpose()); }

}  // namespace splatdyn
