#pragma once

#include "splatdyn/material.hpp"
#include "splatdyn/math.hpp"
#include "splatdyn/svd.hpp"

namespace splatdyn {

struct KirchhoffStress {
  Mat3 tau = Mat3::Zero();  // Pa
};

// tau = 2 mu (F - R) F^T + lambda (J - 1) J I, with R the polar rotation.
// Throws InvertedElementError when det(F) <= 0.
KirchhoffStress kirchhoff_fixed_corotated(const Mat3& F, double mu, double lambda);

// Hencky-strain St. Venant-Kirchhoff: tau = U (2 mu eps + lambda tr(eps) I) U^T,
// eps = log(sigma). Throws DegenerateDeformationError for sigma <= 0.
KirchhoffStress kirchhoff_stvk(const Mat3& F, double mu, double lambda);

// Elasticity law selected by `params`, after the optional stretch clamp.
KirchhoffStress kirchhoff_stress(const Mat3& F, const MaterialParams& params);

// Drucker-Prager cone coefficient sqrt(2/3) * 2 sin(phi) / (3 - sin(phi)).
double drucker_prager_alpha(double friction_angle_deg);

// Yield function of the Drucker-Prager model evaluated on Hencky strain:
// ||dev(eps)|| + alpha (3 lambda + 2 mu) tr(eps) / (2 mu).
double drucker_prager_delta_gamma(const Vec3& hencky, const MaterialParams& params);

// Plastic projections of a trial elastic deformation. Inputs inside the
// admissible set are returned bit-identical.
Mat3 return_map_drucker_prager(const Mat3& F, const MaterialParams& params);
Mat3 return_map_von_mises(const Mat3& F, const MaterialParams& params);

// Dispatches on params.plasticity; identity for Plasticity::None.
Mat3 apply_return_map(const Mat3& F, const MaterialParams& params);

}  // namespace splatdyn
