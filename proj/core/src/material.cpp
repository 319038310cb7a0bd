#include "splatdyn/material.hpp"

#include <cmath>

#include "splatdyn/error.hpp"

namespace splatdyn {

std::string_view to_string(Elasticity e) {
  switch (e) {
    case Elasticity::FixedCorotated: return "fixed_corotated";
    case Elasticity::StVK: return "stvk";
  }
  return "?";
}

std::string_view to_string(Plasticity p) {
  switch (p) {
    case Plasticity::None: return "none";
    case Plasticity::DruckerPrager: return "drucker_prager";
    case Plasticity::VonMises: return "von_mises";
  }
  return "?";
}

std::optional<Elasticity> parse_elasticity(std::string_view s) {
  if (s == "fixed_corotated") return Elasticity::FixedCorotated;
  if (s == "stvk") return Elasticity::StVK;
  return std::nullopt;
}

std::optional<Plasticity> parse_plasticity(std::string_view s) {
  if (s == "none") return Plasticity::None;
  if (s == "drucker_prager") return Plasticity::DruckerPrager;
  if (s == "von_mises") return Plasticity::VonMises;
  return std::nullopt;
}

LameModuli lame_from_young_poisson(double youngs_modulus, double poisson_ratio) {
  if (!(youngs_modulus > 0.0) || !std::isfinite(youngs_modulus))
    throw ParameterError("Young's modulus must be positive and finite");
  if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5))
    throw ParameterError("Poisson ratio must lie in [0, 0.5), got " + std::to_string(poisson_ratio));
  const double e = youngs_modulus, nu = poisson_ratio;
  return {e / (2.0 * (1.0 + nu)), e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))};
}

MaterialParams MaterialParams::make(double youngs_modulus, double poisson_ratio, double density,
                                    Elasticity elasticity, Plasticity plasticity) {
  MaterialParams m;
  m.youngs_modulus = youngs_modulus;
  m.poisson_ratio = poisson_ratio;
  m.density = density;
  m.elasticity = elasticity;
  m.plasticity = plasticity;
  m.derive_moduli();
  return m;
}

void MaterialParams::derive_moduli() {
  const auto lame = lame_from_young_poisson(youngs_modulus, poisson_ratio);
  shear_modulus = lame.mu;
  lame_modulus = lame.lambda;
}

void MaterialParams::validate() const {
  const auto lame = lame_from_young_poisson(youngs_modulus, poisson_ratio);
  if (lame.mu != shear_modulus || lame.lambda != lame_modulus)
    throw ParameterError("derived Lame moduli are stale; call derive_moduli()");
  if (!(density > 0.0) || !std::isfinite(density)) throw ParameterError("density must be positive");
  if (plasticity == Plasticity::DruckerPrager && !(friction_angle_deg > 0.0 && friction_angle_deg < 90.0))
    throw ParameterError("Drucker-Prager friction angle must lie in (0, 90) degrees");
  if (plasticity == Plasticity::VonMises && !(yield_stress >= 0.0))
    throw ParameterError("von Mises yield stress must be non-negative");
  if (stretch_clamp && !(stretch_clamp->min > 0.0 && stretch_clamp->min <= 1.0 && stretch_clamp->max >= 1.0))
    throw ParameterError("stretch clamp must satisfy 0 < min <= 1 <= max");
}

}  // namespace splatdyn
