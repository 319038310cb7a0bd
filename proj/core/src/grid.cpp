#include "splatdyn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splatdyn/error.hpp"

namespace splatdyn {

Grid::Grid(Index3 dims, double spacing, const Vec3& origin)
    : dims_(dims), dx_(spacing), origin_(origin) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw Error("grid spacing must be positive");
  for (int d : dims)
    if (d < 3) throw Error("grid needs at least 3 nodes per axis");
  const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  mass_.assign(n, 0.0);
  velocity_.assign(n, Vec3::Zero());
  active_hi_ = dims_;
}

Grid Grid::fit(const Vec3& lo, const Vec3& hi, int resolution, int margin) {
  if (resolution < 1) throw Error("grid resolution must be >= 1");
  const Vec3 extent = (hi - lo).cwiseMax(0.0);
  double longest = extent.maxCoeff();
  if (!(longest > 0.0)) longest = 1.0;
  const double dx = longest / resolution;
  Index3 dims{};
  for (int a = 0; a < 3; ++a)
    dims[a] = static_cast<int>(std::ceil(extent[a] / dx - 1e-9)) + 2 * margin + 1;
  return Grid(dims, dx, lo - Vec3::Constant(margin * dx));
}

bool Grid::contains(const Vec3& x) const noexcept {
  return (x.array() >= domain_min().array()).all() && (x.array() <= domain_max().array()).all();
}

double Grid::total_mass() const {
  double m = 0.0;
  for (double v : mass_) m += v;
  return m;
}

Vec3 Grid::total_momentum() const {
  Vec3 p = Vec3::Zero();
  for (std::size_t n = 0; n < mass_.size(); ++n)
    if (mass_[n] > 0.0) p += mass_[n] * velocity_[n];
  return p;
}

void Grid::set_active_box(const Index3& lo, const Index3& hi) {
  for (int a = 0; a < 3; ++a) {
    active_lo_[a] = std::clamp(lo[a], 0, dims_[a]);
    active_hi_[a] = std::clamp(hi[a], active_lo_[a], dims_[a]);
  }
}

void Grid::clear() {
  for (int i = active_lo_[0]; i < active_hi_[0]; ++i)
    for (int j = active_lo_[1]; j < active_hi_[1]; ++j)
      for (int k = active_lo_[2]; k < active_hi_[2]; ++k) {
        const std::size_t n = index(i, j, k);
        mass_[n] = 0.0;
        velocity_[n].setZero();
      }
  active_lo_ = {0, 0, 0};
  active_hi_ = {0, 0, 0};
}

double bspline_quadratic(double u) noexcept {
  const double a = std::abs(u);
  if (a < 0.5) return 0.75 - a * a;
  if (a < 1.5) return 0.5 * (1.5 - a) * (1.5 - a);
  return 0.0;
}

double bspline_quadratic_derivative(double u) noexcept {
  const double a = std::abs(u);
  const double s = u < 0.0 ? -1.0 : 1.0;
  if (a < 0.5) return -2.0 * u;
  if (a < 1.5) return -s * (1.5 - a);
  return 0.0;
}

Stencil bspline_stencil(const Vec3& x, const Grid& grid) {
  Stencil s;
  const double inv_dx = 1.0 / grid.spacing();
  for (int a = 0; a < 3; ++a) {
    const double g = (x[a] - grid.origin()[a]) * inv_dx;
    const double base = std::floor(g - 0.5);
    if (!std::isfinite(g) || base < 0.0 || base + 2.0 > grid.dims()[a] - 1)
      throw StencilError("particle too close to the grid edge along axis " + std::to_string(a));
    s.base[a] = static_cast<int>(base);
    const double fx = g - base;  // in [0.5, 1.5)
    s.w[a] = {0.5 * (1.5 - fx) * (1.5 - fx), 0.75 - (fx - 1.0) * (fx - 1.0), 0.5 * (fx - 0.5) * (fx - 0.5)};
    s.dw[a] = {(fx - 1.5) * inv_dx, -2.0 * (fx - 1.0) * inv_dx, (fx - 0.5) * inv_dx};
  }
  return s;
}

std::array<StencilNode, 27> stencil_nodes(const Stencil& s) {
  std::array<StencilNode, 27> out{};
  int n = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) out[n++] = {s.node(a, b, c), s.weight(a, b, c), s.gradient(a, b, c)};
  return out;
}

}  // namespace splatdyn
