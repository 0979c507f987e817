#include "dimercorr/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace dimercorr::presets {

namespace {

Preset make(std::string name, std::string description, const Vec3& u1, const Vec3& u2) {
  Preset p;
  p.name = std::move(name);
  p.description = std::move(description);
  p.config.geometry.mu1_debye = 10.0 * u1.normalized();
  p.config.geometry.mu2_debye = 10.0 * u2.normalized();
  p.config.geometry.r_nm = Vec3(0.0, 0.0, 2.0);
  p.config.geometry.omega_s_ev = 1.8;
  return p;
}

std::vector<Preset> build() {
  const double magic = std::acos(1.0 / std::sqrt(3.0));
  const Vec3 tilted(std::sin(magic), 0.0, std::cos(magic));
  return {
      make("h-dimer", "parallel dipoles side by side (along x)", Vec3::UnitX(), Vec3::UnitX()),
      make("j-dimer", "parallel dipoles head to tail (along z)", Vec3::UnitZ(), Vec3::UnitZ()),
      make("orthogonal", "dipoles along x and y", Vec3::UnitX(), Vec3::UnitY()),
      make("dimer-45", "dipoles along x and (x+y)/sqrt2, 45 degrees apart", Vec3::UnitX(), Vec3(1.0, 1.0, 0.0)),
      make("magic-angle", "parallel dipoles at 54.74 degrees to the separation", tilted, tilted),
  };
}

}  // namespace

const std::vector<Preset>& all() {
  static const std::vector<Preset> presets = build();
  return presets;
}

const Preset& get(const std::string& name) {
  for (const auto& p : all())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : all()) known += (known.empty() ? "" : ", ") + p.name;
  throw std::invalid_argument("unknown preset '" + name + "' (known: " + known + ")");
}

Vec3 perpendicular_detection(const liouvillian::SystemConfig& config) {
  return geometry::perpendicular_direction(config.geometry);
}

}  // namespace dimercorr::presets
