#pragma once

#include <optional>
#include <string>

#include "dimercorr/geometry.hpp"
#include "dimercorr/hilbert.hpp"
#include "dimercorr/types.hpp"
#include "dimercorr/vibrational.hpp"

namespace dimercorr::liouvillian {

// Vibrational weight on pairs of optical jump operators.
enum class OpticalDressing {
  kLocal,    // same-emitter pairs 1, cross-emitter pairs kappa0^2
  kQuartic,  // same-emitter pairs kappa0^4, cross-emitter pairs kappa0^2
};

struct Flags {
  bool lamb_shifts = false;     // imaginary parts of the phonon-coupling rates
  bool secular = false;         // keep only equal-frequency pairs
  bool rotating_frame = true;   // remove the bare transition energy from the coherent part
  bool include_phases = false;  // sub-wavelength phases in the mode operators
};

struct SystemConfig {
  geometry::DimerGeometry geometry;
  vibrational::VibrationalBath bath;
  double optical_temperature_k = 5800.0;
  std::optional<double> pump_rate_per_ps;  // default: single-emitter optical rate
  std::optional<Vec3> pump_direction;      // default: geometry::symmetric_pump_direction
  double nonrad_rate_per_ps = 0.0;
  double eea_rate_per_ps = 0.0;
  std::optional<double> coupling_override_mev;  // replaces the dipole-dipole value
  OpticalDressing optical_dressing = OpticalDressing::kLocal;
  bool allow_unequal_dipoles = false;
  Flags flags;

  void validate() const;  // throws std::invalid_argument
};

struct Hamiltonian {
  Operator h = Operator::Zero();  // lab frame, meV
  double omega_prime_mev = 0.0;
  double coupling_prime_mev = 0.0;
  double coupling_bare_mev = 0.0;  // dipole-dipole value (or override), before any dressing
  double coupling_hf_mev = 0.0;    // after the high-frequency factor only
};

Hamiltonian renormalized_hamiltonian(const SystemConfig& config, const vibrational::PhononFunctions& phonon);

struct Metadata {
  double omega_prime_mev = 0.0;
  double coupling_prime_mev = 0.0;
  double coupling_bare_mev = 0.0;
  double kappa0 = 1.0;
  double kappa_h = 1.0;
  double lambda_total_mev = 0.0;
  double frame_offset_mev = 0.0;
  double gamma_opt_per_ps = 0.0;     // single emitter, at omega', bare dipole
  double local_decay_per_ps = 0.0;   // including dressing factors
  double optical_occupation = 0.0;   // photon occupation at omega'
  double pump_rate_per_ps = 0.0;
  double pump_ladder_rate_per_ps = 0.0;  // gg -> pumped state rate
  std::string optical_dressing;
};

struct Liouvillian {
  Superoperator matrix = Superoperator::Zero();
  Superoperator coherent = Superoperator::Zero();
  Superoperator optical = Superoperator::Zero();
  Superoperator phonon = Superoperator::Zero();
  Superoperator pump = Superoperator::Zero();
  Superoperator extra = Superoperator::Zero();
  hilbert::EigenSystem eig;
  Hamiltonian hamiltonian;
  Metadata meta;
};

// Superoperator builders.
Superoperator kron(const Operator& a, const Operator& b);
Superoperator left_multiply(const Operator& a);   // rho -> a rho
Superoperator right_multiply(const Operator& b);  // rho -> rho b
Superoperator commutator(const Operator& h);      // rho -> h rho - rho h
Superoperator lindblad(const Operator& jump);     // rho -> L rho L+ - {L+ L, rho}/2
// X(rho) -> X(rho^+)^+
Superoperator hermitian_conjugate_map(const Superoperator& x);

Superoperator optical_dissipator(const SystemConfig& config, const hilbert::EigenSystem& eig,
                                 const vibrational::PhononFunctions& phonon);
Superoperator phonon_coupling_dissipator(const SystemConfig& config, const hilbert::EigenSystem& eig,
                                         const vibrational::PhononFunctions& phonon, double coupling_hf_mev);
Superoperator pump_dissipator(const SystemConfig& config, double pump_rate_per_ps);
Superoperator extra_channels(const SystemConfig& config);

// Optical rate of one emitter at the renormalized transition, 1/ps.
double default_pump_rate(const SystemConfig& config, const vibrational::PhononFunctions& phonon);

Liouvillian assemble(const SystemConfig& config);
// Reuses bath functions across configurations that share a bath.
Liouvillian assemble(const SystemConfig& config, const vibrational::PhononFunctions& phonon);

}  // namespace dimercorr::liouvillian
