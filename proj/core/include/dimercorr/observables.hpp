#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dimercorr/dynamics.hpp"
#include "dimercorr/geometry.hpp"
#include "dimercorr/liouvillian.hpp"
#include "dimercorr/types.hpp"
#include "dimercorr/vibrational.hpp"

namespace dimercorr::observables {

// A detection direction that receives no light from the dimer.
class DarkDirectionError : public std::runtime_error {
 public:
  explicit DarkDirectionError(const std::string& what) : std::runtime_error(what) {}
};

// sum_lambda N^2 <sigma+ sigma->, Debye^2 (the common shell prefactor dropped).
double directional_intensity(const Operator& rho, const geometry::ModeOperators& mode);

// Photons per steradian in units of the single-emitter rate of dipole 1.
double directional_intensity_per_sr(const Operator& rho, const geometry::DimerGeometry& geom,
                                    const geometry::DetectionMode& mode);

std::vector<double> directional_intensity(const dynamics::Trajectory& traj, const geometry::DimerGeometry& geom,
                                          const geometry::DetectionMode& mode);

// Total emission in units of the single-emitter rate of dipole 1: site
// populations weighted by |mu_m|^2 plus the dipole-overlap coherence term.
double total_intensity(const Operator& rho, const geometry::DimerGeometry& geom);
std::vector<double> total_intensity(const dynamics::Trajectory& traj, const geometry::DimerGeometry& geom);

// Directional intensity integrated over the sphere on a product grid.
double sphere_integrated_intensity(const Operator& rho, const geometry::DimerGeometry& geom, int n_phi = 32);

struct G2Curve {
  std::vector<double> tau_ps;
  std::vector<double> g2;
  std::vector<double> coincidences;  // G2, Debye^4
  double singles_q = 0.0;            // Debye^2
  double singles_q_prime = 0.0;
};

// Post-detection state sum_lambda N^2 sigma- rho sigma+ for mode q.
Operator post_detection_state(const Operator& rho, const geometry::ModeOperators& mode);

// Throws DarkDirectionError when either mode collects no light.
G2Curve g2_curve(const dynamics::Propagator& prop, const Operator& rho_ss, const geometry::DimerGeometry& geom,
                 const geometry::DetectionMode& q, const geometry::DetectionMode& q_prime,
                 const std::vector<double>& tau_grid, bool include_phases = false);

// Intermediate-state overlap form of g2 at tau = 0.
double g2_zero_delay(const Operator& rho_ss, const geometry::DimerGeometry& geom, const geometry::DetectionMode& q,
                     const geometry::DetectionMode& q_prime, bool include_phases = false);

// d g2 / d tau at tau = 0 taken directly from the generator.
double g2_slope_from_generator(const Superoperator& generator, const Operator& rho_ss,
                               const geometry::DimerGeometry& geom, const geometry::DetectionMode& q,
                               const geometry::DetectionMode& q_prime);

struct SlopeRates {
  double gamma_per_ps = 0.0;           // single-emitter optical rate
  double occupation = 0.0;             // photon occupation at the transition
  double pump_ladder_rate_per_ps = 0.0;
};
SlopeRates slope_rates(const liouvillian::Metadata& meta);

// Rate-equation slope of g2(tau) at tau = 0 for an orthogonal dimer and an
// in-plane detection direction whose intermediate state is the symmetric
// (pumped) or antisymmetric superposition. Throws std::invalid_argument for
// any other configuration.
double g2_slope_zero_delay(const Operator& rho_ss, const SlopeRates& rates, const geometry::DimerGeometry& geom,
                           const geometry::DetectionMode& q);

struct SpectrumPeak {
  double position_mev = 0.0;
  double height = 0.0;
  double fwhm_mev = 0.0;
};

struct Spectrum {
  std::vector<double> omega_rel_mev;  // relative to the bare transition energy
  std::vector<double> values;         // normalized to a maximum of 1
  std::vector<SpectrumPeak> peaks;
};

struct SpectrumOptions {
  double broadening_mev = 0.0;  // extra Lorentzian half width
  bool phonon_sideband = true;
};

// Steady state of the generator given (normally the unpumped one).
Spectrum absorption_spectrum(const liouvillian::Liouvillian& liou, const Operator& rho_ss,
                             const liouvillian::SystemConfig& config, const vibrational::PhononFunctions& phonon,
                             const std::vector<double>& omega_rel_mev, const SpectrumOptions& options = {});

std::vector<SpectrumPeak> find_peaks(const std::vector<double>& x, const std::vector<double>& y,
                                     double min_height = 1e-3);

// Gaussian instrument response of full width at half maximum delta_tau,
// applied to a curve that is even in tau and flat beyond its last point.
std::vector<double> convolve_instrument_response(const std::vector<double>& tau_ps,
                                                 const std::vector<double>& values, double delta_tau_ps);

// Linear steps resolving the coherent period up to ~200 ps, then a
// logarithmic tail to 20 optical lifetimes.
std::vector<double> default_tau_grid(double coupling_prime_mev, double gamma_per_ps, int tail_points = 200);

}  // namespace dimercorr::observables
