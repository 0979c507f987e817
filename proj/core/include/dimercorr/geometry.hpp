#pragma once

#include <array>
#include <utility>

#include "dimercorr/types.hpp"

namespace dimercorr::geometry {

struct DimerGeometry {
  Vec3 mu1_debye = Vec3(10.0, 0.0, 0.0);
  Vec3 mu2_debye = Vec3(10.0, 0.0, 0.0);
  Vec3 r_nm = Vec3(0.0, 0.0, 2.0);  // separation from emitter 1 to emitter 2
  double omega_s_ev = 1.8;
};

// Throws std::invalid_argument. Identical monomers (|mu1| = |mu2|) are
// required unless allow_unequal_dipoles is set.
void validate(const DimerGeometry& geom, bool allow_unequal_dipoles = false);

// Near-field dipole-dipole coupling in meV; positive for side-by-side
// parallel dipoles.
double forster_coupling(const DimerGeometry& geom);

// Cosine of the angle between the dipoles.
double dipole_cross_factor(const DimerGeometry& geom);

std::pair<Vec3, Vec3> polarization_basis(double theta, double phi);

struct DetectionMode {
  double theta = 0.0;
  double phi = 0.0;
  Vec3 q_hat = Vec3::UnitZ();
  Vec3 lambda1 = Vec3::UnitX();
  Vec3 lambda2 = Vec3::UnitY();

  static DetectionMode from_angles(double theta, double phi);
  // Any nonzero vector; normalized internally.
  static DetectionMode from_direction(const Vec3& q);
};

// projections[m][p]: dipole m (0, 1) onto polarization p (0, 1), Debye.
struct DipoleProjections {
  std::array<std::array<double, 2>, 2> value{};
  bool frame_fallback = false;  // dipole 1 parallel to r: global dot products used
};

DipoleProjections dipole_projections_direct(const DimerGeometry& geom, const DetectionMode& mode);

// Closed forms in the dimer frame (z along r, dipole 1 in the xz plane),
// rotated back onto the global polarization pair.
DipoleProjections dipole_projections(const DimerGeometry& geom, const DetectionMode& mode);

struct PolarizationChannel {
  bool present = false;
  double norm = 0.0;                  // N_{q,lambda}, Debye
  std::array<cd, 2> coefficient{};    // amplitude of sigma_m^- inside sigma_{q,lambda}^-
  Operator lower = Operator::Zero();  // normalized sigma_{q,lambda}^-
  Operator raise = Operator::Zero();
  Ket psi_g = Ket::Zero();  // sigma^+ |gg>
  Ket psi_e = Ket::Zero();  // sigma^- |ee>
};

struct ModeOperators {
  std::array<PolarizationChannel, 2> channels;
  DipoleProjections projections;

  // Sum over polarizations of N^2 sigma^+ sigma^-, in Debye^2.
  Operator intensity_operator() const;
};

// The optional sub-wavelength phase attaches exp(+-i k q.r/2) to the two
// emitters, with k fixed by the transition energy.
ModeOperators mode_operators(const DimerGeometry& geom, const DetectionMode& mode,
                             bool include_phases = false);

// A direction perpendicular to both dipoles (or to the common axis).
Vec3 perpendicular_direction(const DimerGeometry& geom);

// Direction whose in-plane polarization projects equally on both dipoles, so
// that its intermediate state is the symmetric superposition.
Vec3 symmetric_pump_direction(const DimerGeometry& geom);

// Rotation about axis (unit) by angle, applied to v.
Vec3 rotate(const Vec3& v, const Vec3& axis, double angle);

}  // namespace dimercorr::geometry
