#pragma once

#include <span>

#include "splatdyn/grid.hpp"
#include "splatdyn/math.hpp"

namespace splatdyn {

struct BoundaryCondition {
  enum class Kind { StickyPlane, SlipPlane, DomainWalls };

  Kind kind = Kind::DomainWalls;
  Vec3 point = Vec3::Zero();    // planes only
  Vec3 normal = Vec3::UnitY();  // planes only; points into the free side
  double thickness = 1.0;       // in grid cells

  static BoundaryCondition sticky_plane(const Vec3& point, const Vec3& normal, double thickness = 1.0);
  static BoundaryCondition slip_plane(const Vec3& point, const Vec3& normal, double thickness = 1.0);
  static BoundaryCondition domain_walls(double thickness = 3.0);

  // Throws ConfigError for a non-unit normal or negative thickness.
  void validate() const;
  bool operator==(const BoundaryCondition&) const = default;
};

// Grid-level collision response on the active nodes:
//  sticky:  v <- 0 for nodes closer than `thickness` cells to the plane
//           (or behind it);
//  slip:    v <- v - (v.n) n in the same band, only when v.n < 0;
//  walls:   slip on all six lattice faces.
void apply_boundary(Grid& grid, std::span<const BoundaryCondition> conditions);

}  // namespace splatdyn
