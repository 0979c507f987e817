#pragma once

#include <cmath>
#include <numbers>

// Internal unit system: energies in meV, times in ps, dipoles in Debye,
// distances in nm. Rates are angular (1/ps).
namespace dimercorr::units {

inline constexpr double kHbarMevPs = 0.6582119569;      // meV * ps
inline constexpr double kBoltzmannMevPerK = 0.08617333262;
inline constexpr double kDebyeCoulombMeter = 3.33564e-30;
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kCoulombConstant = 8.9875517923e9;     // 1/(4 pi eps0), SI
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;
inline constexpr double kSpeedOfLight = 299792458.0;           // m/s
inline constexpr double kHbarJouleSecond = 1.054571817e-34;
inline constexpr double kHbarCEvNm = 197.3269804;

inline constexpr double kPi = std::numbers::pi;

inline double ev_to_mev(double ev) { return 1e3 * ev; }

// Bose-Einstein occupation at energy omega (meV) and temperature (K).
// Zero temperature gives zero occupation for omega > 0.
inline double bose_occupation(double omega_mev, double temperature_k) {
  if (temperature_k <= 0.0) return 0.0;
  return 1.0 / std::expm1(omega_mev / (kBoltzmannMevPerK * temperature_k));
}

// Spontaneous emission rate (1/ps) of a dipole |mu| (Debye) at transition
// energy omega (meV): omega^3 |mu|^2 / (3 pi eps0 hbar c^3).
inline double spontaneous_rate_per_ps(double omega_mev, double mu_sq_debye2) {
  const double omega_rad_s = omega_mev * 1e-3 * kElementaryCharge / kHbarJouleSecond;
  const double mu_sq = mu_sq_debye2 * kDebyeCoulombMeter * kDebyeCoulombMeter;
  const double rate_s = omega_rad_s * omega_rad_s * omega_rad_s * mu_sq /
                        (3.0 * kPi * kVacuumPermittivity * kHbarJouleSecond *
                         kSpeedOfLight * kSpeedOfLight * kSpeedOfLight);
  return rate_s * 1e-12;
}

}  // namespace dimercorr::units
