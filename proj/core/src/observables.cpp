#include "dimercorr/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "dimercorr/hilbert.hpp"
#include "dimercorr/units.hpp"

namespace dimercorr::observables {

namespace {

using geometry::DetectionMode;
using geometry::DimerGeometry;
using geometry::ModeOperators;

std::string describe(const DetectionMode& m) {
  std::ostringstream os;
  os << "(theta=" << m.theta << " rad, phi=" << m.phi << " rad, q=[" << m.q_hat.x() << ", " << m.q_hat.y() << ", "
     << m.q_hat.z() << "])";
  return os.str();
}

double expect(const Operator& op, const Operator& rho) { return (op * rho).trace().real(); }

double singles_or_throw(const Operator& rho, const ModeOperators& ops, const DetectionMode& mode,
                        const DimerGeometry& geom) {
  const double s = directional_intensity(rho, ops);
  const double scale = geom.mu1_debye.squaredNorm() + geom.mu2_debye.squaredNorm();
  if (!(s > 1e-14 * scale)) {
    throw DarkDirectionError("no emission along detection direction " + describe(mode));
  }
  return s;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double standard_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * units::kPi); }

}  // namespace

double directional_intensity(const Operator& rho, const ModeOperators& mode) {
  return expect(mode.intensity_operator(), rho);
}

double directional_intensity_per_sr(const Operator& rho, const DimerGeometry& geom, const DetectionMode& mode) {
  const auto ops = geometry::mode_operators(geom, mode);
  return 3.0 / (8.0 * units::kPi * geom.mu1_debye.squaredNorm()) * directional_intensity(rho, ops);
}

std::vector<double> directional_intensity(const dynamics::Trajectory& traj, const DimerGeometry& geom,
                                          const DetectionMode& mode) {
  const Operator op = geometry::mode_operators(geom, mode).intensity_operator();
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& rho : traj.states) out.push_back(expect(op, rho));
  return out;
}

double total_intensity(const Operator& rho, const DimerGeometry& geom) {
  using hilbert::BasisState;
  const double ref = geom.mu1_debye.squaredNorm();
  const double g1 = geom.mu1_debye.squaredNorm() / ref;
  const double g2 = geom.mu2_debye.squaredNorm() / ref;
  const double cross = geometry::dipole_cross_factor(geom);
  const int eg = static_cast<int>(BasisState::kEG);
  const int ge = static_cast<int>(BasisState::kGE);
  const int ee = static_cast<int>(BasisState::kEE);
  return g1 * rho(eg, eg).real() + g2 * rho(ge, ge).real() + (g1 + g2) * rho(ee, ee).real() +
         std::sqrt(g1 * g2) * cross * 2.0 * rho(eg, ge).real();
}

std::vector<double> total_intensity(const dynamics::Trajectory& traj, const DimerGeometry& geom) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& rho : traj.states) out.push_back(total_intensity(rho, geom));
  return out;
}

double sphere_integrated_intensity(const Operator& rho, const DimerGeometry& geom, int n_phi) {
  auto ring = [&](double c) {
    const double theta = std::acos(std::clamp(c, -1.0, 1.0));
    double acc = 0.0;
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * units::kPi * k / n_phi;
      acc += directional_intensity_per_sr(rho, geom, DetectionMode::from_angles(theta, phi));
    }
    return acc * 2.0 * units::kPi / n_phi;
  };
  return boost::math::quadrature::gauss<double, 20>::integrate(ring, -1.0, 1.0);
}

Operator post_detection_state(const Operator& rho, const ModeOperators& mode) {
  Operator out = Operator::Zero();
  for (const auto& ch : mode.channels) {
    if (ch.present) out += ch.norm * ch.norm * ch.lower * rho * ch.raise;
  }
  return out;
}

G2Curve g2_curve(const dynamics::Propagator& prop, const Operator& rho_ss, const DimerGeometry& geom,
                 const DetectionMode& q, const DetectionMode& q_prime, const std::vector<double>& tau_grid,
                 bool include_phases) {
  const auto ops_q = geometry::mode_operators(geom, q, include_phases);
  const auto ops_qp = geometry::mode_operators(geom, q_prime, include_phases);
  G2Curve out;
  out.tau_ps = tau_grid;
  out.singles_q = singles_or_throw(rho_ss, ops_q, q, geom);
  out.singles_q_prime = singles_or_throw(rho_ss, ops_qp, q_prime, geom);
  const Operator post = post_detection_state(rho_ss, ops_q);
  const auto raw = dynamics::regression_correlator(prop, post, Operator::Identity(), Operator::Identity(),
                                                   ops_qp.intensity_operator(), tau_grid);
  const double norm = out.singles_q * out.singles_q_prime;
  out.coincidences.reserve(raw.size());
  out.g2.reserve(raw.size());
  for (const auto& v : raw) {
    out.coincidences.push_back(v.real());
    out.g2.push_back(v.real() / norm);
  }
  return out;
}

double g2_zero_delay(const Operator& rho_ss, const DimerGeometry& geom, const DetectionMode& q,
                     const DetectionMode& q_prime, bool include_phases) {
  const auto ops_q = geometry::mode_operators(geom, q, include_phases);
  const auto ops_qp = geometry::mode_operators(geom, q_prime, include_phases);
  const double iq = singles_or_throw(rho_ss, ops_q, q, geom);
  const double iqp = singles_or_throw(rho_ss, ops_qp, q_prime, geom);
  const double n_ee = rho_ss(3, 3).real();
  double sum = 0.0;
  for (const auto& a : ops_q.channels) {
    if (!a.present) continue;
    for (const auto& b : ops_qp.channels) {
      if (!b.present) continue;
      sum += a.norm * a.norm * b.norm * b.norm * std::norm(b.psi_g.dot(a.psi_e));
    }
  }
  return sum * n_ee / (iq * iqp);
}

double g2_slope_from_generator(const Superoperator& generator, const Operator& rho_ss, const DimerGeometry& geom,
                               const DetectionMode& q, const DetectionMode& q_prime) {
  const auto ops_q = geometry::mode_operators(geom, q);
  const auto ops_qp = geometry::mode_operators(geom, q_prime);
  const double iq = singles_or_throw(rho_ss, ops_q, q, geom);
  const double iqp = singles_or_throw(rho_ss, ops_qp, q_prime, geom);
  const VecRho d = generator * vectorize(post_detection_state(rho_ss, ops_q));
  const double dg = (dynamics::trace_functional(ops_qp.intensity_operator()) * d)(0).real();
  return dg / (iq * iqp);
}

SlopeRates slope_rates(const liouvillian::Metadata& meta) {
  return {meta.local_decay_per_ps, meta.optical_occupation, meta.pump_ladder_rate_per_ps};
}

double g2_slope_zero_delay(const Operator& rho_ss, const SlopeRates& rates, const DimerGeometry& geom,
                           const DetectionMode& q) {
  if (std::abs(geometry::dipole_cross_factor(geom)) > 1e-9) {
    throw std::invalid_argument("g2_slope_zero_delay: dipoles are not orthogonal");
  }
  const auto ops = geometry::mode_operators(geom, q);
  const geometry::PolarizationChannel* only = nullptr;
  for (const auto& ch : ops.channels) {
    if (!ch.present) continue;
    if (only) throw std::invalid_argument("g2_slope_zero_delay: detection sees two polarization channels");
    only = &ch;
  }
  if (!only) throw DarkDirectionError("no emission along detection direction " + describe(q));

  const Ket s = hilbert::symmetric_state();
  const Ket a = hilbert::antisymmetric_state();
  const double on_s = std::norm(s.dot(only->psi_g));
  const double on_a = std::norm(a.dot(only->psi_g));
  bool symmetric = false;
  Ket x;
  if (on_s > 1.0 - 1e-9) {
    symmetric = true;
    x = s;
  } else if (on_a > 1.0 - 1e-9) {
    x = a;
  } else {
    throw std::invalid_argument("g2_slope_zero_delay: intermediate state is neither symmetric nor antisymmetric");
  }
  const double n_x = (x.adjoint() * rho_ss * x)(0, 0).real();
  const double n_ee = rho_ss(3, 3).real();
  const double g = rates.gamma_per_ps;
  const double n = rates.occupation;
  const double pump = symmetric ? rates.pump_ladder_rate_per_ps : 0.0;
  const double denom = n_x + n_ee;
  return (g * n * n_x - g * (n + 1.0) * n_ee + pump * n_x) / (denom * denom);
}

std::vector<SpectrumPeak> find_peaks(const std::vector<double>& x, const std::vector<double>& y, double min_height) {
  std::vector<SpectrumPeak> out;
  const std::size_t n = y.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] >= min_height)) continue;
    const double half = 0.5 * y[i];
    double left = x.front(), right = x.back();
    for (std::size_t j = i; j > 0; --j) {
      if (y[j - 1] < half) {
        left = x[j - 1] + (half - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1]);
        break;
      }
    }
    for (std::size_t j = i; j + 1 < n; ++j) {
      if (y[j + 1] < half) {
        right = x[j] + (y[j] - half) * (x[j + 1] - x[j]) / (y[j] - y[j + 1]);
        break;
      }
    }
    out.push_back({x[i], y[i], right - left});
  }
  return out;
}

Spectrum absorption_spectrum(const liouvillian::Liouvillian& liou, const Operator& rho_ss,
                             const liouvillian::SystemConfig& config, const vibrational::PhononFunctions& phonon,
                             const std::vector<double>& omega_rel_mev, const SpectrumOptions& options) {
  if (omega_rel_mev.size() < 3) throw std::invalid_argument("absorption_spectrum: need at least 3 grid points");
  for (std::size_t i = 1; i < omega_rel_mev.size(); ++i) {
    if (!(omega_rel_mev[i] > omega_rel_mev[i - 1])) {
      throw std::invalid_argument("absorption_spectrum: frequency grid must be strictly increasing");
    }
  }
  const double hbar = units::kHbarMevPs;
  const dynamics::Propagator prop(liou.matrix);
  if (!prop.spectral()) throw std::runtime_error("absorption_spectrum: generator is not diagonalizable");

  const Vec3 mu[2] = {config.geometry.mu1_debye, config.geometry.mu2_debye};
  const double ref = mu[0].squaredNorm();
  const double k2 = phonon.kappa0() * phonon.kappa0();
  Eigen::Matrix<cd, 16, 1> pole = Eigen::Matrix<cd, 16, 1>::Zero();
  Eigen::Matrix<cd, 16, 1> side = Eigen::Matrix<cd, 16, 1>::Zero();
  for (int m = 0; m < 2; ++m) {
    const Operator lower = hilbert::site_operator(m + 1, hilbert::Ladder::kLower);
    for (int n = 0; n < 2; ++n) {
      const Operator raise = hilbert::site_operator(n + 1, hilbert::Ladder::kRaise);
      const double w = k2 * mu[m].dot(mu[n]) / ref;
      const auto amp = dynamics::modal_amplitudes(prop, raise * rho_ss, lower);
      pole += w * amp;
      if (m == n) side += w * amp;
    }
  }
  // Shift the generator eigenvalues from the simulation frame to the bare transition energy.
  const double shift = (units::ev_to_mev(config.geometry.omega_s_ev) - liou.meta.frame_offset_mev) / hbar;
  const double eta = options.broadening_mev / hbar;
  Eigen::Matrix<cd, 16, 1> lam;
  for (int k = 0; k < 16; ++k) lam(k) = prop.eigenvalues()(k) + cd(-eta, shift);
  const double amp_max = std::max(pole.cwiseAbs().maxCoeff(), 1e-300);

  std::vector<double> values(omega_rel_mev.size(), 0.0);
  for (std::size_t i = 0; i < omega_rel_mev.size(); ++i) {
    const cd iw(0.0, omega_rel_mev[i] / hbar);
    cd acc = 0.0;
    for (int k = 0; k < 16; ++k) {
      if (std::abs(pole(k)) < 1e-12 * amp_max) continue;
      acc += -pole(k) / (iw + lam(k));
    }
    values[i] = acc.real();
  }

  if (options.phonon_sideband && !phonon.trivial()) {
    // h(t) = sum_k side_k e^{lam_k t} (e^{phi(t)} - 1), integrated against e^{i w t}
    // with the trapezoid rule on a grid fine against the bath cutoff.
    const double dt = 0.02 * hbar / phonon.omega_c();
    double t_end = hbar / phonon.omega_c();
    while (std::abs(phonon.phi(t_end)) > 1e-6 * phonon.phi0()) t_end *= 1.5;
    const int nt = static_cast<int>(std::ceil(t_end / dt)) + 1;
    std::vector<cd> h(nt);
    for (int j = 0; j < nt; ++j) {
      const double t = j * dt;
      cd s = 0.0;
      for (int k = 0; k < 16; ++k) {
        if (std::abs(side(k)) < 1e-12 * amp_max) continue;
        s += side(k) * std::exp(lam(k) * t);
      }
      h[j] = s * (std::exp(phonon.phi(t)) - 1.0);
    }
    for (std::size_t i = 0; i < omega_rel_mev.size(); ++i) {
      const double w = omega_rel_mev[i] / hbar;
      const cd step = std::exp(cd(0.0, w * dt));
      cd phase = 1.0;
      cd acc = 0.5 * h[0];
      for (int j = 1; j < nt; ++j) {
        phase *= step;
        acc += (j == nt - 1 ? 0.5 : 1.0) * h[j] * phase;
      }
      values[i] += (acc * dt).real();
    }
  }

  const double vmax = *std::max_element(values.begin(), values.end());
  if (!(vmax > 0.0)) throw std::runtime_error("absorption_spectrum: spectrum has no positive values");
  for (auto& v : values) v /= vmax;
  Spectrum out;
  out.omega_rel_mev = omega_rel_mev;
  out.values = std::move(values);
  out.peaks = find_peaks(out.omega_rel_mev, out.values);
  return out;
}

std::vector<double> convolve_instrument_response(const std::vector<double>& tau_ps, const std::vector<double>& values,
                                                 double delta_tau_ps) {
  if (!(delta_tau_ps > 0.0)) throw std::invalid_argument("instrument response width must be > 0");
  if (tau_ps.size() != values.size() || tau_ps.size() < 2) {
    throw std::invalid_argument("instrument response: grid and values must match and hold >= 2 points");
  }
  for (std::size_t i = 1; i < tau_ps.size(); ++i) {
    if (!(tau_ps[i] > tau_ps[i - 1])) throw std::invalid_argument("instrument response: tau grid must increase");
  }
  if (tau_ps.front() < 0.0) throw std::invalid_argument("instrument response: tau grid must start at >= 0");

  // Mirror onto negative delays.
  std::vector<double> xs, ys;
  for (std::size_t i = tau_ps.size(); i-- > 0;) {
    if (tau_ps[i] == 0.0) continue;
    xs.push_back(-tau_ps[i]);
    ys.push_back(values[i]);
  }
  for (std::size_t i = 0; i < tau_ps.size(); ++i) {
    xs.push_back(tau_ps[i]);
    ys.push_back(values[i]);
  }
  const double sigma = delta_tau_ps / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double end = values.back();

  std::vector<double> out(tau_ps.size());
  for (std::size_t i = 0; i < tau_ps.size(); ++i) {
    const double x = tau_ps[i];
    double acc = end * (standard_normal_cdf((xs.front() - x) / sigma) + 1.0 - standard_normal_cdf((xs.back() - x) / sigma));
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
      const double a = (xs[j] - x) / sigma;
      const double b = (xs[j + 1] - x) / sigma;
      if (b < -12.0 || a > 12.0) continue;
      const double slope = (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]);
      const double at_x = ys[j] + slope * (x - xs[j]);
      acc += at_x * (standard_normal_cdf(b) - standard_normal_cdf(a)) +
             slope * sigma * (standard_normal_pdf(a) - standard_normal_pdf(b));
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> default_tau_grid(double coupling_prime_mev, double gamma_per_ps, int tail_points) {
  if (!(gamma_per_ps > 0.0)) throw std::invalid_argument("default_tau_grid: rate must be > 0");
  const double t_end = 20.0 / gamma_per_ps;
  const double period = coupling_prime_mev != 0.0 ? 2.0 * units::kPi * units::kHbarMevPs / std::abs(coupling_prime_mev)
                                                  : 20.0;
  const double step = std::clamp(period / 20.0, 0.01, 1.0);
  const double linear_end = std::min(200.0, t_end);
  std::vector<double> grid;
  const int n_lin = static_cast<int>(std::floor(linear_end / step));
  for (int i = 0; i <= n_lin; ++i) grid.push_back(i * step);
  const double start = grid.back();
  if (t_end > start * (1.0 + 1e-12)) {
    const double ratio = std::pow(t_end / start, 1.0 / tail_points);
    for (int i = 1; i <= tail_points; ++i) grid.push_back(i == tail_points ? t_end : start * std::pow(ratio, i));
  }
  return grid;
}

}  // namespace dimercorr::observables
