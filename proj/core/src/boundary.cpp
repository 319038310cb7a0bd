#include "splatdyn/boundary.hpp"

#include <cmath>

#include "splatdyn/error.hpp"

namespace splatdyn {
namespace {

void slip(Vec3& v, const Vec3& n) {
  const double vn = v.dot(n);
  if (vn < 0.0) v -= vn * n;
}

}  // namespace

BoundaryCondition BoundaryCondition::sticky_plane(const Vec3& point, const Vec3& normal, double thickness) {
  return {Kind::StickyPlane, point, normal, thickness};
}

BoundaryCondition BoundaryCondition::slip_plane(const Vec3& point, const Vec3& normal, double thickness) {
  return {Kind::SlipPlane, point, normal, thickness};
}

BoundaryCondition BoundaryCondition::domain_walls(double thickness) {
  return {Kind::DomainWalls, Vec3::Zero(), Vec3::UnitY(), thickness};
}

void BoundaryCondition::validate() const {
  if (!(thickness >= 0.0) || !std::isfinite(thickness)) throw ConfigError("boundary thickness must be >= 0");
  if (kind != Kind::DomainWalls && std::abs(normal.norm() - 1.0) > 1e-9)
    throw ConfigError("boundary plane normal must be unit length");
}

void apply_boundary(Grid& grid, std::span<const BoundaryCondition> conditions) {
  const auto& lo = grid.active_lo();
  const auto& hi = grid.active_hi();
  const auto& dims = grid.dims();
  const double dx = grid.spacing();
  for (const auto& bc : conditions) {
    const double band = bc.thickness * dx;
    for (int i = lo[0]; i < hi[0]; ++i)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int k = lo[2]; k < hi[2]; ++k) {
          const std::size_t n = grid.index(i, j, k);
          if (!(grid.mass(n) > 0.0)) continue;
          Vec3& v = grid.velocity(n);
          switch (bc.kind) {
            case BoundaryCondition::Kind::StickyPlane:
              if ((grid.node_position(i, j, k) - bc.point).dot(bc.normal) <= band) v.setZero();
              break;
            case BoundaryCondition::Kind::SlipPlane:
              if ((grid.node_position(i, j, k) - bc.point).dot(bc.normal) <= band) slip(v, bc.normal);
              break;
            case BoundaryCondition::Kind::DomainWalls: {
              const int idx[3] = {i, j, k};
              for (int a = 0; a < 3; ++a) {
                if (idx[a] < bc.thickness) slip(v, Vec3::Unit(a));
                if (idx[a] > dims[a] - 1 - bc.thickness) slip(v, -Vec3::Unit(a));
              }
              break;
            }
          }
        }
  }
}

}  // namespace splatdyn
