#pragma once

#include <string>
#include <vector>

#include "dimercorr/liouvillian.hpp"

namespace dimercorr::presets {

struct Preset {
  std::string name;
  std::string description;
  liouvillian::SystemConfig config;
};

// h-dimer, j-dimer, orthogonal, dimer-45, magic-angle: 10 D dipoles, 2 nm
// apart along z, 1.8 eV, default baths.
const std::vector<Preset>& all();

// Throws std::invalid_argument for an unknown name.
const Preset& get(const std::string& name);

// Detection direction perpendicular to both dipoles.
Vec3 perpendicular_detection(const liouvillian::SystemConfig& config);

}  // namespace dimercorr::presets
