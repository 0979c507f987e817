#include "dimercorr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <stdexcept>

#include "dimercorr/hilbert.hpp"
#include "dimercorr/units.hpp"

namespace dimercorr::geometry {

namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

Vec3 any_perpendicular(const Vec3& v) {
  const Vec3 u = v.normalized();
  const Vec3 trial = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (trial - u * u.dot(trial)).normalized();
}

}  // namespace

void validate(const DimerGeometry& geom, bool allow_unequal_dipoles) {
  if (!finite(geom.mu1_debye) || !finite(geom.mu2_debye) || !finite(geom.r_nm)) {
    throw std::invalid_argument("geometry: non-finite vector component");
  }
  if (geom.r_nm.norm() <= 0.0) throw std::invalid_argument("geometry: zero separation");
  if (geom.mu1_debye.norm() <= 0.0 || geom.mu2_debye.norm() <= 0.0) {
    throw std::invalid_argument("geometry: zero dipole moment");
  }
  if (!(geom.omega_s_ev > 0.0)) throw std::invalid_argument("geometry: omega_s_ev must be > 0");
  if (!allow_unequal_dipoles) {
    const double a = geom.mu1_debye.norm();
    const double b = geom.mu2_debye.norm();
    if (std::abs(a - b) > 1e-9 * std::max(a, b)) {
      throw std::invalid_argument("geometry: dipole magnitudes differ (identical monomers expected)");
    }
  }
}

double forster_coupling(const DimerGeometry& geom) {
  const double r = geom.r_nm.norm();
  if (r <= 0.0) throw std::invalid_argument("forster_coupling: zero separation");
  const Vec3& m1 = geom.mu1_debye;
  const Vec3& m2 = geom.mu2_debye;
  const Vec3& rv = geom.r_nm;
  // Debye^2 / nm^3 -> J
  const double debye2_per_nm3 = units::kDebyeCoulombMeter * units::kDebyeCoulombMeter * 1e27;
  const double bracket = m1.dot(m2) / (r * r * r) - 3.0 * rv.dot(m1) * rv.dot(m2) / std::pow(r, 5);
  const double joule = units::kCoulombConstant * bracket * debye2_per_nm3;
  return joule / units::kElementaryCharge * 1e3;
}

double dipole_cross_factor(const DimerGeometry& geom) {
  return geom.mu1_debye.normalized().dot(geom.mu2_debye.normalized());
}

std::pair<Vec3, Vec3> polarization_basis(double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  return {Vec3(ct * cp, ct * sp, -st), Vec3(-sp, cp, 0.0)};
}

DetectionMode DetectionMode::from_angles(double theta, double phi) {
  DetectionMode m;
  m.theta = theta;
  m.phi = phi;
  m.q_hat = Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
  std::tie(m.lambda1, m.lambda2) = polarization_basis(theta, phi);
  return m;
}

DetectionMode DetectionMode::from_direction(const Vec3& q) {
  const double n = q.norm();
  if (!(n > 0.0) || !q.allFinite()) throw std::invalid_argument("detection direction must be a nonzero vector");
  const Vec3 u = q / n;
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  const double phi = (std::abs(u.x()) + std::abs(u.y()) > 0.0) ? std::atan2(u.y(), u.x()) : 0.0;
  DetectionMode m = from_angles(theta, phi);
  m.q_hat = u;
  return m;
}

DipoleProjections dipole_projections_direct(const DimerGeometry& geom, const DetectionMode& mode) {
  DipoleProjections p;
  const Vec3* mu[2] = {&geom.mu1_debye, &geom.mu2_debye};
  const Vec3* lam[2] = {&mode.lambda1, &mode.lambda2};
  for (int m = 0; m < 2; ++m)
    for (int l = 0; l < 2; ++l) p.value[m][l] = mu[m]->dot(*lam[l]);
  return p;
}

DipoleProjections dipole_projections(const DimerGeometry& geom, const DetectionMode& mode) {
  const Vec3& m1 = geom.mu1_debye;
  const Vec3& m2 = geom.mu2_debye;
  const double r = geom.r_nm.norm();
  const Vec3 rh = geom.r_nm / r;
  const double big_lambda = std::sqrt(std::max(0.0, r * r * m1.squaredNorm() - std::pow(geom.r_nm.dot(m1), 2)));
  if (big_lambda <= 1e-12 * r * m1.norm()) {
    DipoleProjections p = dipole_projections_direct(geom, mode);
    p.frame_fallback = true;
    return p;
  }

  // Dimer frame: e_z along r, e_y along r x mu1, e_x completes it.
  const Vec3 ez = rh;
  const Vec3 ey = geom.r_nm.cross(m1) / big_lambda;
  const Vec3 ex = ey.cross(ez);
  const Vec3 qd(mode.q_hat.dot(ex), mode.q_hat.dot(ey), mode.q_hat.dot(ez));
  const double th = std::acos(std::clamp(qd.z(), -1.0, 1.0));
  const double ph = (std::abs(qd.x()) + std::abs(qd.y()) > 0.0) ? std::atan2(qd.y(), qd.x()) : 0.0;
  const double ct = std::cos(th), st = std::sin(th), cp = std::cos(ph), sp = std::sin(ph);

  const double m1r = m1.dot(rh);
  const double m2r = m2.dot(rh);
  const double in_plane = (r / big_lambda) * (m1.dot(m2) - m1r * m2r);
  const double out_plane = (r / big_lambda) * rh.dot(m1.cross(m2));

  // Projections onto the dimer-frame polarization pair.
  double local[2][2];
  local[0][0] = (big_lambda / r) * ct * cp - m1r * st;
  local[0][1] = -(big_lambda / r) * sp;
  local[1][0] = in_plane * ct * cp + out_plane * ct * sp - m2r * st;
  local[1][1] = -in_plane * sp + out_plane * cp;

  // Both pairs span the plane normal to q; rotate onto the global one.
  const auto [l1d, l2d] = polarization_basis(th, ph);
  const Vec3 l1 = l1d.x() * ex + l1d.y() * ey + l1d.z() * ez;
  const Vec3 l2 = l2d.x() * ex + l2d.y() * ey + l2d.z() * ez;
  const double c11 = mode.lambda1.dot(l1), c12 = mode.lambda1.dot(l2);
  const double c21 = mode.lambda2.dot(l1), c22 = mode.lambda2.dot(l2);

  DipoleProjections p;
  for (int m = 0; m < 2; ++m) {
    p.value[m][0] = c11 * local[m][0] + c12 * local[m][1];
    p.value[m][1] = c21 * local[m][0] + c22 * local[m][1];
  }
  return p;
}

Operator ModeOperators::intensity_operator() const {
  Operator out = Operator::Zero();
  for (const auto& c : channels) {
    if (c.present) out += c.norm * c.norm * c.raise * c.lower;
  }
  return out;
}

ModeOperators mode_operators(const DimerGeometry& geom, const DetectionMode& mode, bool include_phases) {
  using hilbert::Ladder;
  ModeOperators out;
  out.projections = dipole_projections(geom, mode);

  cd phase1 = 1.0, phase2 = 1.0;
  if (include_phases) {
    const double k_per_nm = geom.omega_s_ev / units::kHbarCEvNm;
    const double half = 0.5 * k_per_nm * mode.q_hat.dot(geom.r_nm);
    phase1 = std::polar(1.0, half);
    phase2 = std::polar(1.0, -half);
  }

  const Operator s1 = hilbert::site_operator(1, Ladder::kLower);
  const Operator s2 = hilbert::site_operator(2, Ladder::kLower);
  const double scale = std::max(geom.mu1_debye.norm(), geom.mu2_debye.norm());

  for (int l = 0; l < 2; ++l) {
    PolarizationChannel& ch = out.channels[l];
    const double p1 = out.projections.value[0][l];
    const double p2 = out.projections.value[1][l];
    const double n = std::hypot(p1, p2);
    if (n <= 1e-12 * scale) continue;
    ch.present = true;
    ch.norm = n;
    ch.coefficient = {p1 * phase1 / n, p2 * phase2 / n};
    ch.lower = ch.coefficient[0] * s1 + ch.coefficient[1] * s2;
    ch.raise = ch.lower.adjoint();
    ch.psi_g = ch.raise * hilbert::basis_ket(hilbert::BasisState::kGG);
    ch.psi_e = ch.lower * hilbert::basis_ket(hilbert::BasisState::kEE);
  }
  return out;
}

Vec3 perpendicular_direction(const DimerGeometry& geom) {
  const Vec3 a = geom.mu1_debye.normalized();
  const Vec3 b = geom.mu2_debye.normalized();
  const Vec3 c = a.cross(b);
  if (c.norm() > 1e-9) return c.normalized();
  const Vec3 d = a.cross(geom.r_nm.normalized());
  if (d.norm() > 1e-9) return d.normalized();
  return any_perpendicular(a);
}

Vec3 symmetric_pump_direction(const DimerGeometry& geom) {
  const Vec3 a = geom.mu1_debye.normalized();
  const Vec3 b = geom.mu2_debye.normalized();
  const Vec3 d = a - b;
  if (d.norm() > 1e-9) return d.normalized();
  return perpendicular_direction(geom);
}

Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()) * v;
}

}  // namespace dimercorr::geometry
