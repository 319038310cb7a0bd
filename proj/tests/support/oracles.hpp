#pragma once

#include <functional>
#include <span>
#include <vector>

#include "splatdyn/camera.hpp"
#include "splatdyn/math.hpp"
#include "splatdyn/render.hpp"

// Independent reference computations. Nothing here calls into the library
// routine it is used to check.
namespace splatdyn::oracle {

// Singular values of F from Eigen's two-sided Jacobi SVD.
Vec3 singular_values(const Mat3& F);

// Strain energy densities.
double energy_fixed_corotated(const Mat3& F, double mu, double lambda);
double energy_stvk_hencky(const Mat3& F, double mu, double lambda);

// Kirchhoff stress P F^T with P = dPsi/dF by central differences.
Mat3 fd_kirchhoff(const std::function<double(const Mat3&)>& energy, const Mat3& F, double h = 1e-6);

// Hencky strain log(sigma) of F (det > 0).
Vec3 hencky(const Mat3& F);

// Symplectic Euler v += g dt; x += v dt after n steps, closed form.
struct Ballistic {
  Vec3 x;
  Vec3 v;
};
Ballistic free_fall(const Vec3& x0, const Vec3& v0, const Vec3& g, double dt, long n);

// Front-to-back compositing with the product written out: sum_i c_i a_i prod_{j<i} (1 - a_j)
// plus the background behind the remaining transmittance. Inputs are front
// to back.
Vec3 composite_product_form(std::span<const double> alphas, std::span<const Vec3> colors, const Vec3& background);

// Gaussian footprint alpha from opacity, a 2D mean and the floored 2D
// covariance, with the 2x2 inverse written out by hand.
double footprint_alpha(double opacity, const Vec2& mean, const Mat2& cov_floored, const Vec2& point);

// Per-pixel loop over all splats in (depth, index) order with the same
// front-to-back accumulation, alpha cutoff and transmittance early-out as
// documented for the renderer.
Image brute_force_render(std::span<const Splat2D> splats, const Camera& camera, const Vec3& background);

}  // namespace splatdyn::oracle
