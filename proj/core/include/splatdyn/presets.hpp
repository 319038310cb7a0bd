#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "splatdyn/material.hpp"

namespace splatdyn {

// Named material behaviors. Values are engine defaults chosen to give
// visibly different motion, not measured constants; tune per scene.
struct MaterialPreset {
  std::string name;
  MaterialParams params;
  double default_dt = 1e-4;  // s, stable for ~1 m objects on a 64-cell grid
};

const std::vector<MaterialPreset>& material_presets();
// Throws ConfigError listing the known names when `name` is unknown.
const MaterialPreset& material_preset(std::string_view name);
// Throws if any preset breaks the elasticity/plasticity pairing its name
// promises (elastic/jelly: none, metal: von Mises, sand: Drucker-Prager).
void check_preset_table();

}  // namespace splatdyn
