#include "splatdyn/presets.hpp"

#include "splatdyn/error.hpp"

namespace splatdyn {
namespace {

std::vector<MaterialPreset> build_presets() {
  constexpr double kDensity = 1000.0;
  std::vector<MaterialPreset> out;

  out.push_back({"elastic", MaterialParams::make(2e5, 0.35, kDensity), 2e-4});
  out.push_back({"jelly", MaterialParams::make(1e4, 0.45, kDensity), 4e-4});

  auto metal = MaterialParams::make(5e5, 0.3, kDensity, Elasticity::FixedCorotated, Plasticity::VonMises);
  metal.yield_stress = 1e4;
  out.push_back({"metal", metal, 1e-4});

  auto sand = MaterialParams::make(1e5, 0.3, kDensity, Elasticity::StVK, Plasticity::DruckerPrager);
  sand.friction_angle_deg = 35.0;
  out.push_back({"sand", sand, 2e-4});

  auto fracture = MaterialParams::make(2e5, 0.35, kDensity, Elasticity::StVK, Plasticity::None);
  fracture.stretch_clamp = StretchClamp{0.5, 2.0};
  out.push_back({"fracture", fracture, 2e-4});
  return out;
}

}  // namespace

const std::vector<MaterialPreset>& material_presets() {
  static const std::vector<MaterialPreset> kPresets = build_presets();
  return kPresets;
}

const MaterialPreset& material_preset(std::string_view name) {
  for (const auto& p : material_presets())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : material_presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown material preset '" + std::string(name) + "' (known: " + known + ")");
}

void check_preset_table() {
  for (const auto& p : material_presets()) {
    p.params.validate();
    const auto plast = p.params.plasticity;
    const bool ok = (p.name == "elastic" || p.name == "jelly")   ? plast == Plasticity::None
                    : p.name == "metal"                          ? plast == Plasticity::VonMises
                    : p.name == "sand"                           ? plast == Plasticity::DruckerPrager
                                                                 : true;
    if (!ok) throw ConfigError("material preset '" + p.name + "' has an inconsistent plasticity model");
  }
}

}  // namespace splatdyn
