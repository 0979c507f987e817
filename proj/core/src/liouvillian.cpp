#include "dimercorr/liouvillian.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "dimercorr/units.hpp"

namespace dimercorr::liouvillian {

namespace {

using hilbert::BasisState;
using hilbert::BohrDecomposition;
using hilbert::Ladder;

const Operator& identity() {
  static const Operator id = Operator::Identity();
  return id;
}

Operator sigma_x(int emitter) {
  return hilbert::site_operator(emitter, Ladder::kRaise) + hilbert::site_operator(emitter, Ladder::kLower);
}

double frame_offset(const SystemConfig& config) {
  return config.flags.rotating_frame ? units::ev_to_mev(config.geometry.omega_s_ev) : 0.0;
}

double optical_pair_weight(const SystemConfig& config, double kappa0, int m, int n) {
  const double k2 = kappa0 * kappa0;
  if (m != n) return k2;
  return config.optical_dressing == OpticalDressing::kQuartic ? k2 * k2 : 1.0;
}

// X(rho) = sum_{m,n} sum_{w, w'} rate(m, n, w) [A_n(w) rho A_m(w')+ - A_m(w')+ A_n(w) rho]
// over the pairs accepted by `keep`; returns X + X^+.
Superoperator redfield(const std::vector<BohrDecomposition>& ops,
                       const std::function<cd(int, int, double)>& rate,
                       const std::function<bool(int, int, double, double)>& keep) {
  Superoperator x = Superoperator::Zero();
  for (std::size_t m = 0; m < ops.size(); ++m) {
    for (std::size_t n = 0; n < ops.size(); ++n) {
      for (const auto& cn : ops[n]) {
        const cd g = rate(static_cast<int>(m), static_cast<int>(n), cn.frequency);
        if (g == cd(0.0)) continue;
        for (const auto& cm : ops[m]) {
          if (!keep(static_cast<int>(m), static_cast<int>(n), cn.frequency, cm.frequency)) continue;
          const Operator am_dag = cm.op.adjoint();
          x += g * (kron(cm.op.conjugate(), cn.op) -
                    left_multiply(am_dag * cn.op));
        }
      }
    }
  }
  return x + hermitian_conjugate_map(x);
}

}  // namespace

Superoperator kron(const Operator& a, const Operator& b) {
  Superoperator out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

void SystemConfig::validate() const {
  geometry::validate(geometry, allow_unequal_dipoles);
  bath.validate();
  if (!(optical_temperature_k >= 0.0)) throw std::invalid_argument("optical_temperature_k must be >= 0");
  if (pump_rate_per_ps && !(*pump_rate_per_ps >= 0.0)) throw std::invalid_argument("pump_rate_per_ps must be >= 0");
  if (!(nonrad_rate_per_ps >= 0.0)) throw std::invalid_argument("nonrad_rate_per_ps must be >= 0");
  if (!(eea_rate_per_ps >= 0.0)) throw std::invalid_argument("eea_rate_per_ps must be >= 0");
  if (pump_direction && (!(pump_direction->norm() > 0.0) || !pump_direction->allFinite())) {
    throw std::invalid_argument("pump_direction must be a nonzero vector");
  }
  if (coupling_override_mev && !std::isfinite(*coupling_override_mev)) {
    throw std::invalid_argument("coupling_override_mev must be finite");
  }
}

Superoperator left_multiply(const Operator& a) { return kron(identity(), a); }

Superoperator right_multiply(const Operator& b) { return kron(b.transpose(), identity()); }

Superoperator commutator(const Operator& h) { return left_multiply(h) - right_multiply(h); }

Superoperator lindblad(const Operator& jump) {
  const Operator ldl = jump.adjoint() * jump;
  return kron(jump.conjugate(), jump) - 0.5 * (left_multiply(ldl) + right_multiply(ldl));
}

Superoperator hermitian_conjugate_map(const Superoperator& x) {
  // vec(rho^T) is a fixed permutation T; the map is T conj(X) T.
  Superoperator out;
  for (int a = 0; a < 16; ++a) {
    const int ta = (a % 4) * 4 + a / 4;
    for (int b = 0; b < 16; ++b) {
      const int tb = (b % 4) * 4 + b / 4;
      out(a, b) = std::conj(x(ta, tb));
    }
  }
  return out;
}

Hamiltonian renormalized_hamiltonian(const SystemConfig& config, const vibrational::PhononFunctions& phonon) {
  Hamiltonian out;
  out.coupling_bare_mev = config.coupling_override_mev.value_or(geometry::forster_coupling(config.geometry));
  const double kh = phonon.hf().kappa_h;
  out.coupling_hf_mev = kh * kh * out.coupling_bare_mev;
  out.coupling_prime_mev = phonon.kappa0() * phonon.kappa0() * out.coupling_hf_mev;
  out.omega_prime_mev = units::ev_to_mev(config.geometry.omega_s_ev) - phonon.lambda_total();

  const Operator hop = hilbert::site_operator(1, Ladder::kRaise) * hilbert::site_operator(2, Ladder::kLower);
  out.h = out.omega_prime_mev * hilbert::excitation_number() + 0.5 * out.coupling_prime_mev * (hop + hop.adjoint());
  return out;
}

Superoperator optical_dissipator(const SystemConfig& config, const hilbert::EigenSystem& eig,
                                 const vibrational::PhononFunctions& phonon) {
  const double kh = phonon.hf().kappa_h;
  std::vector<BohrDecomposition> ops;
  for (int m = 1; m <= 2; ++m) ops.push_back(hilbert::bohr_decompose(kh * sigma_x(m), eig));

  const Vec3 mu[2] = {config.geometry.mu1_debye, config.geometry.mu2_debye};
  const double t_opt = config.optical_temperature_k;
  const double kappa0 = phonon.kappa0();
  auto rate = [&](int m, int n, double w) -> cd {
    if (w == 0.0) return 0.0;
    const double dot = mu[m].dot(mu[n]);
    const double occ = units::bose_occupation(std::abs(w), t_opt);
    const double weight = w > 0.0 ? 1.0 + occ : occ;
    return 0.5 * optical_pair_weight(config, kappa0, m, n) * units::spontaneous_rate_per_ps(std::abs(w), dot) * weight;
  };
  const double tol = eig.degeneracy_tol;
  const bool secular = config.flags.secular;
  auto keep = [&](int, int, double w, double wp) {
    if (w * wp <= 0.0) return false;  // rotating-wave pairs only
    return !secular || std::abs(w - wp) <= tol;
  };
  return redfield(ops, rate, keep);
}

Superoperator phonon_coupling_dissipator(const SystemConfig& config, const hilbert::EigenSystem& eig,
                                         const vibrational::PhononFunctions& phonon, double coupling_hf_mev) {
  if (coupling_hf_mev == 0.0 || phonon.trivial()) return Superoperator::Zero();
  const Operator hop = hilbert::site_operator(1, Ladder::kRaise) * hilbert::site_operator(2, Ladder::kLower);
  const Operator sx = hop + hop.adjoint();
  const Operator sy = cd(0.0, 1.0) * (hop - hop.adjoint());
  const std::vector<BohrDecomposition> ops = {hilbert::bohr_decompose(sx, eig), hilbert::bohr_decompose(sy, eig)};

  // Both site baths enter the hopping term, so the pair propagator is 2 phi.
  const vibrational::PhononFunctions pair = phonon.pair();
  std::map<double, std::pair<cd, cd>> cache;  // w -> (same, cross)
  auto integrals = [&](double w) -> const std::pair<cd, cd>& {
    auto it = cache.find(w);
    if (it == cache.end()) {
      it = cache
               .emplace(w, std::make_pair(vibrational::coupling_rate(w, pair, vibrational::Combo::kSameOp),
                                          vibrational::coupling_rate(w, pair, vibrational::Combo::kCrossOp)))
               .first;
    }
    return it->second;
  };
  const double pref = std::pow(0.5 * coupling_hf_mev / units::kHbarMevPs, 2);
  const bool lamb = config.flags.lamb_shifts;
  auto rate = [&](int m, int n, double w) -> cd {
    if (m != n) return 0.0;
    const auto& [same, cross] = integrals(w);
    cd g = m == 0 ? 0.5 * pref * (cross + same) : 0.5 * pref * (cross - same);
    return lamb ? g : cd(g.real(), 0.0);
  };
  const double tol = eig.degeneracy_tol;
  const bool secular = config.flags.secular;
  auto keep = [&](int, int, double w, double wp) { return !secular || std::abs(w - wp) <= tol; };
  return redfield(ops, rate, keep);
}

Superoperator pump_dissipator(const SystemConfig& config, double pump_rate_per_ps) {
  if (pump_rate_per_ps == 0.0) return Superoperator::Zero();
  const Vec3 dir = config.pump_direction.value_or(geometry::symmetric_pump_direction(config.geometry));
  const auto mode = geometry::DetectionMode::from_direction(dir);
  const auto ops = geometry::mode_operators(config.geometry, mode, config.flags.include_phases);
  double total = 0.0;
  for (const auto& ch : ops.channels)
    if (ch.present) total += ch.norm * ch.norm;
  if (total <= 0.0) throw std::invalid_argument("pump_direction couples to neither dipole");
  // Weighted like collective emission into that mode: the ladder gg -> psi runs at 2 gamma_p.
  Superoperator out = Superoperator::Zero();
  for (const auto& ch : ops.channels) {
    if (!ch.present) continue;
    const double w = ch.norm * ch.norm / total;
    out += lindblad(std::sqrt(2.0 * pump_rate_per_ps * w) * ch.raise);
  }
  return out;
}

Superoperator extra_channels(const SystemConfig& config) {
  Superoperator out = Superoperator::Zero();
  if (config.nonrad_rate_per_ps > 0.0) {
    const double s = std::sqrt(config.nonrad_rate_per_ps);
    for (int m = 1; m <= 2; ++m) out += lindblad(s * hilbert::site_operator(m, Ladder::kLower));
  }
  if (config.eea_rate_per_ps > 0.0) {
    const double s = std::sqrt(config.eea_rate_per_ps);
    const Ket ee = hilbert::basis_ket(BasisState::kEE);
    out += lindblad(s * hilbert::basis_ket(BasisState::kEG) * ee.adjoint());
    out += lindblad(s * hilbert::basis_ket(BasisState::kGE) * ee.adjoint());
  }
  return out;
}

double default_pump_rate(const SystemConfig& config, const vibrational::PhononFunctions& phonon) {
  const double kh = phonon.hf().kappa_h;
  const double omega_prime = units::ev_to_mev(config.geometry.omega_s_ev) - phonon.lambda_total();
  return kh * kh * units::spontaneous_rate_per_ps(omega_prime, config.geometry.mu1_debye.squaredNorm());
}

Liouvillian assemble(const SystemConfig& config) {
  config.validate();
  return assemble(config, vibrational::PhononFunctions(config.bath));
}

Liouvillian assemble(const SystemConfig& config, const vibrational::PhononFunctions& phonon) {
  config.validate();
  Liouvillian out;
  out.hamiltonian = renormalized_hamiltonian(config, phonon);
  out.eig = hilbert::eigendecompose(out.hamiltonian.h);

  const double offset = frame_offset(config);
  const Operator h_frame = out.hamiltonian.h - offset * hilbert::excitation_number();
  out.coherent = cd(0.0, -1.0 / units::kHbarMevPs) * commutator(h_frame);
  out.optical = optical_dissipator(config, out.eig, phonon);
  out.phonon = phonon_coupling_dissipator(config, out.eig, phonon, out.hamiltonian.coupling_hf_mev);
  const double pump_rate = config.pump_rate_per_ps.value_or(default_pump_rate(config, phonon));
  out.pump = pump_dissipator(config, pump_rate);
  out.extra = extra_channels(config);
  out.matrix = out.coherent + out.optical + out.phonon + out.pump + out.extra;

  auto& meta = out.meta;
  meta.omega_prime_mev = out.hamiltonian.omega_prime_mev;
  meta.coupling_prime_mev = out.hamiltonian.coupling_prime_mev;
  meta.coupling_bare_mev = out.hamiltonian.coupling_bare_mev;
  meta.kappa0 = phonon.kappa0();
  meta.kappa_h = phonon.hf().kappa_h;
  meta.lambda_total_mev = phonon.lambda_total();
  meta.frame_offset_mev = offset;
  meta.gamma_opt_per_ps =
      units::spontaneous_rate_per_ps(meta.omega_prime_mev, config.geometry.mu1_debye.squaredNorm());
  meta.local_decay_per_ps =
      meta.kappa_h * meta.kappa_h * optical_pair_weight(config, meta.kappa0, 0, 0) * meta.gamma_opt_per_ps;
  meta.optical_occupation = units::bose_occupation(meta.omega_prime_mev, config.optical_temperature_k);
  meta.pump_rate_per_ps = pump_rate;
  meta.pump_ladder_rate_per_ps = 2.0 * pump_rate;
  meta.optical_dressing = config.optical_dressing == OpticalDressing::kQuartic ? "quartic" : "local";
  return out;
}

}  // namespace dimercorr::liouvillian
