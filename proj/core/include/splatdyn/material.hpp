#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace splatdyn {

enum class Elasticity { FixedCorotated, StVK };
enum class Plasticity { None, DruckerPrager, VonMises };

std::string_view to_string(Elasticity e);
std::string_view to_string(Plasticity p);
std::optional<Elasticity> parse_elasticity(std::string_view s);
std::optional<Plasticity> parse_plasticity(std::string_view s);

struct LameModuli {
  double mu = 0.0;
  double lambda = 0.0;
};

// mu = E / (2(1+nu)), lambda = E nu / ((1+nu)(1-2nu)).
// Throws ParameterError unless E > 0 and 0 <= nu < 0.5.
LameModuli lame_from_young_poisson(double youngs_modulus, double poisson_ratio);

// Singular values are clamped to [min, max] before the stress law runs.
struct StretchClamp {
  double min = 0.5;
  double max = 2.0;
  bool operator==(const StretchClamp&) const = default;
};

struct MaterialParams {
  double youngs_modulus = 1e4;  // Pa
  double poisson_ratio = 0.3;
  double shear_modulus = 0.0;   // derived
  double lame_modulus = 0.0;    // derived
  double density = 1000.0;      // kg/m^3
  Elasticity elasticity = Elasticity::FixedCorotated;
  Plasticity plasticity = Plasticity::None;
  double friction_angle_deg = 0.0;  // Drucker-Prager
  double yield_stress = 0.0;        // von Mises
  std::optional<StretchClamp> stretch_clamp;

  // Builds a parameter set with the Lame moduli derived from (E, nu).
  static MaterialParams make(double youngs_modulus, double poisson_ratio, double density,
                             Elasticity elasticity = Elasticity::FixedCorotated,
                             Plasticity plasticity = Plasticity::None);

  // Recomputes shear_modulus / lame_modulus from E and nu.
  void derive_moduli();
  void validate() const;

  bool operator==(const MaterialParams&) const = default;
};

}  // namespace splatdyn
