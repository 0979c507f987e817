#pragma once

#include <vector>

#include "dimercorr/types.hpp"

namespace dimercorr::vibrational {

// Gaussian high-frequency peak alpha * w^3 * exp(-(w - center)^2 / width^2).
struct HfMode {
  double alpha = 0.0;      // meV^-2
  double omega_mev = 0.0;  // center
  double gamma_mev = 1.0;  // width
};

// Peak whose reorganization energy (by quadrature) equals lambda_mev.
HfMode hf_mode_from_reorganization(double lambda_mev, double omega_mev, double gamma_mev);

struct VibrationalBath {
  double lambda0_mev = 5.0;
  double omega_c_mev = 90.0;
  double temperature_k = 300.0;
  std::vector<HfMode> hf_modes;

  void validate() const;  // throws std::invalid_argument
};

// Super-Ohmic part plus the high-frequency peaks, meV.
double spectral_density(double omega_mev, const VibrationalBath& bath);

double hf_mode_reorganization(const HfMode& mode);

// lambda0 + sum of high-frequency reorganization energies.
double reorganization_energy(const VibrationalBath& bath);

struct HfRenormalization {
  double kappa_h = 1.0;
  double lambda_h_mev = 0.0;
};
HfRenormalization hf_renormalization(const VibrationalBath& bath);

// Low-frequency propagator by direct frequency quadrature (t in ps). Slow;
// meant as a reference. Throws std::runtime_error if the quadrature error
// estimate stays above tolerance.
cd phonon_propagator(double t_ps, const VibrationalBath& bath);

// exp(-phi(0)/2) for the low-frequency bath (closed form).
double kappa0(const VibrationalBath& bath);

// Closed-form low-frequency propagator. `scale` multiplies phi, so scale 2
// describes the product of two independent, identical site baths.
class PhononFunctions {
 public:
  explicit PhononFunctions(const VibrationalBath& bath, double scale = 1.0);

  cd phi(double t_ps) const;
  double phi0() const { return phi0_; }
  // exp(-phi(0)/2) of this (possibly scaled) propagator.
  double kappa() const { return kappa_; }
  // Single-site value, independent of scale.
  double kappa0() const { return kappa0_; }
  double scale() const { return scale_; }
  double lambda0() const { return lambda0_; }
  double lambda_total() const { return lambda_total_; }
  const HfRenormalization& hf() const { return hf_; }
  // |phi(t)| < 1e-8 |phi(0)| beyond this time, ps.
  double t_max_ps() const { return t_max_ps_; }
  double omega_c() const { return omega_c_; }
  double temperature() const { return temperature_; }
  bool trivial() const { return lambda0_ <= 0.0; }

  PhononFunctions pair() const;  // scale doubled

 private:
  PhononFunctions() = default;
  cd phi_tau(double tau) const;  // tau = t / hbar, 1/meV

  double lambda0_ = 0.0;
  double omega_c_ = 1.0;
  double temperature_ = 0.0;
  double scale_ = 1.0;
  double amplitude_ = 0.0;  // lambda0 / (2 omega_c^3)
  double beta_ = 0.0;       // 1/meV, 0 at zero temperature
  double phi0_ = 0.0;
  double kappa_ = 1.0;
  double kappa0_ = 1.0;
  double lambda_total_ = 0.0;
  double t_max_ps_ = 0.0;
  HfRenormalization hf_;
};

enum class Combo {
  kSameOp,   // <B+ B+>: exp(-phi)
  kCrossOp,  // <B- B+>: exp(+phi)
};

// kappa^2 * int_0^inf exp(i w t / hbar) (exp(-+phi(t)) - 1) dt, in ps, using
// the kappa and phi of `phonon`. Multiply by (coupling / hbar)^2 for a rate.
// Throws std::runtime_error if the time integral does not settle.
cd coupling_rate(double omega_mev, const PhononFunctions& phonon, Combo combo);

}  // namespace dimercorr::vibrational
