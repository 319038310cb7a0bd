#include "splatdyn/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "splatdyn/error.hpp"

namespace splatdyn {
namespace {

constexpr int kDim = 3;

Vec3 hencky_strain(const Decomposition3& d) {
  if (!(d.sigma.array() > 0.0).all())
    throw DegenerateDeformationError("non-positive singular value in Hencky strain");
  return d.sigma.array().log().matrix();
}

Mat3 rebuild(const Decomposition3& d, const Vec3& sigma) {
  return d.U * sigma.asDiagonal() * d.V.transpose();
}

}  // namespace

KirchhoffStress kirchhoff_fixed_corotated(const Mat3& F, double mu, double lambda) {
  const double J = F.determinant();
  if (!(J > 0.0)) throw InvertedElementError("fixed corotated stress: det(F) <= 0");
  const Decomposition3 d = polar_svd3(F);
  const Mat3 R = d.rotation();
  KirchhoffStress out;
  out.tau = 2.0 * mu * (F - R) * F.transpose() + lambda * (J - 1.0) * J * Mat3::Identity();
  return out;
}

KirchhoffStress kirchhoff_stvk(const Mat3& F, double mu, double lambda) {
  if (!(F.determinant() > 0.0)) throw InvertedElementError("StVK stress: det(F) <= 0");
  const Decomposition3 d = polar_svd3(F);
  const Vec3 eps = hencky_strain(d);
  const Vec3 diag = 2.0 * mu * eps + Vec3::Constant(lambda * eps.sum());
  KirchhoffStress out;
  out.tau = symmetrized(d.U * diag.asDiagonal() * d.U.transpose());
  return out;
}

KirchhoffStress kirchhoff_stress(const Mat3& F, const MaterialParams& params) {
  Mat3 Fe = F;
  if (params.stretch_clamp) {
    Decomposition3 d = polar_svd3(F);
    const Vec3 clamped = d.sigma.cwiseMax(params.stretch_clamp->min).cwiseMin(params.stretch_clamp->max);
    if (clamped != d.sigma) Fe = rebuild(d, clamped);
  }
  switch (params.elasticity) {
    case Elasticity::FixedCorotated:
      return kirchhoff_fixed_corotated(Fe, params.shear_modulus, params.lame_modulus);
    case Elasticity::StVK:
      return kirchhoff_stvk(Fe, params.shear_modulus, params.lame_modulus);
  }
  return {};
}

double drucker_prager_alpha(double friction_angle_deg) {
  const double s = std::sin(friction_angle_deg * std::numbers::pi / 180.0);
  return std::sqrt(2.0 / 3.0) * 2.0 * s / (3.0 - s);
}

double drucker_prager_delta_gamma(const Vec3& eps, const MaterialParams& p) {
  const double tr = eps.sum();
  const Vec3 dev = eps - Vec3::Constant(tr / kDim);
  const double mu = p.shear_modulus, lambda = p.lame_modulus;
  return dev.norm() + drucker_prager_alpha(p.friction_angle_deg) * (kDim * lambda + 2.0 * mu) * tr / (2.0 * mu);
}

Mat3 return_map_drucker_prager(const Mat3& F, const MaterialParams& params) {
  if (!(F.determinant() > 0.0)) throw InvertedElementError("Drucker-Prager return map: det(F) <= 0");
  const Decomposition3 d = polar_svd3(F);
  const Vec3 eps = hencky_strain(d);
  const double tr = eps.sum();

  // Expansion: the material cannot carry tension, snap to the stress-free state.
  if (tr > 0.0) return rebuild(d, Vec3::Ones());

  const double delta_gamma = drucker_prager_delta_gamma(eps, params);
  if (delta_gamma <= 0.0) return F;

  const Vec3 dev = eps - Vec3::Constant(tr / kDim);
  const double dev_norm = dev.norm();
  if (dev_norm == 0.0) return F;
  const Vec3 projected = eps - delta_gamma * dev / dev_norm;
  return rebuild(d, projected.array().exp().matrix());
}

Mat3 return_map_von_mises(const Mat3& F, const MaterialParams& params) {
  if (!(F.determinant() > 0.0)) throw InvertedElementError("von Mises return map: det(F) <= 0");
  const Decomposition3 d = polar_svd3(F);
  const Vec3 eps = hencky_strain(d);
  const Vec3 dev = eps - Vec3::Constant(eps.sum() / kDim);
  const double dev_norm = dev.norm();
  const double delta_gamma = dev_norm - params.yield_stress / (2.0 * params.shear_modulus);
  if (delta_gamma <= 0.0 || dev_norm == 0.0) return F;
  const Vec3 projected = eps - delta_gamma * dev / dev_norm;
  return rebuild(d, projected.array().exp().matrix());
}

Mat3 apply_return_map(const Mat3& F, const MaterialParams& params) {
  switch (params.plasticity) {
    case Plasticity::None: return F;
    case Plasticity::DruckerPrager: return return_map_drucker_prager(F, params);
    case Plasticity::VonMises: return return_map_von_mises(F, params);
  }
  return F;
}

}  // namespace splatdyn
