#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "splatdyn/math.hpp"

namespace splatdyn {

using Index3 = std::array<int, 3>;

// Uniform node lattice. Node (i,j,k) sits at origin + dx * (i,j,k).
class Grid {
 public:
  Grid() = default;
  Grid(Index3 dims, double spacing, const Vec3& origin);

  // Lattice covering [lo, hi] with `resolution` cells along the longest
  // axis plus `margin` cells of padding on every side.
  static Grid fit(const Vec3& lo, const Vec3& hi, int resolution, int margin);

  const Index3& dims() const noexcept { return dims_; }
  double spacing() const noexcept { return dx_; }
  const Vec3& origin() const noexcept { return origin_; }
  std::size_t node_count() const noexcept { return mass_.size(); }

  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(i) * dims_[1] + static_cast<std::size_t>(j)) * dims_[2] +
           static_cast<std::size_t>(k);
  }
  std::size_t index(const Index3& n) const noexcept { return index(n[0], n[1], n[2]); }
  Vec3 node_position(int i, int j, int k) const noexcept {
    return origin_ + dx_ * Vec3(i, j, k);
  }
  Vec3 domain_min() const noexcept { return origin_; }
  Vec3 domain_max() const noexcept {
    return origin_ + dx_ * Vec3(dims_[0] - 1, dims_[1] - 1, dims_[2] - 1);
  }
  bool contains(const Vec3& x) const noexcept;

  double& mass(std::size_t n) { return mass_[n]; }
  double mass(std::size_t n) const { return mass_[n]; }
  // Velocity after particle_to_grid; meaningful only where mass > 0.
  Vec3& velocity(std::size_t n) { return velocity_[n]; }
  const Vec3& velocity(std::size_t n) const { return velocity_[n]; }

  double total_mass() const;
  Vec3 total_momentum() const;

  // Nodes touched by the last transfer: [active_lo, active_hi) per axis.
  // Defaults to the whole lattice.
  const Index3& active_lo() const noexcept { return active_lo_; }
  const Index3& active_hi() const noexcept { return active_hi_; }
  void set_active_box(const Index3& lo, const Index3& hi);

  // Zeros mass and velocity (inside the active box, which is all that can
  // be non-zero) and resets the box to empty.
  void clear();

 private:
  Index3 dims_{0, 0, 0};
  double dx_ = 1.0;
  Vec3 origin_ = Vec3::Zero();
  std::vector<double> mass_;
  std::vector<Vec3> velocity_;
  Index3 active_lo_{0, 0, 0};
  Index3 active_hi_{0, 0, 0};
};

inline constexpr int kBsplineDegree = 2;

// APIC affine prefactor 12 / (dx^2 (b + 1)); for quadratic splines this
// is the inverse of the inertia-like tensor D = dx^2 / 4.
constexpr double affine_prefactor(double dx) { return 12.0 / (dx * dx * (kBsplineDegree + 1)); }
static_assert(12.0 / (kBsplineDegree + 1) == 4.0, "quadratic APIC prefactor must be 4/dx^2");

// 3x3x3 quadratic B-spline stencil. Node (base + (a,b,c)) has weight
// w[0][a] * w[1][b] * w[2][c].
struct Stencil {
  Index3 base{0, 0, 0};
  std::array<std::array<double, 3>, 3> w{};   // [axis][offset]
  std::array<std::array<double, 3>, 3> dw{};  // d w / d x, already divided by dx

  double weight(int a, int b, int c) const noexcept { return w[0][a] * w[1][b] * w[2][c]; }
  Vec3 gradient(int a, int b, int c) const noexcept {
    return Vec3(dw[0][a] * w[1][b] * w[2][c], w[0][a] * dw[1][b] * w[2][c], w[0][a] * w[1][b] * dw[2][c]);
  }
  Index3 node(int a, int b, int c) const noexcept { return {base[0] + a, base[1] + b, base[2] + c}; }
};

// Quadratic B-spline kernel and its derivative in cell units.
double bspline_quadratic(double u) noexcept;
double bspline_quadratic_derivative(double u) noexcept;

struct StencilNode {
  Index3 node;
  double weight;
  Vec3 gradient;
};

// Throws StencilError when any stencil node falls outside the lattice.
Stencil bspline_stencil(const Vec3& x, const Grid& grid);
// The same stencil flattened to its 27 (node, w, grad w) entries.
std::array<StencilNode, 27> stencil_nodes(const Stencil& s);

}  // namespace splatdyn
