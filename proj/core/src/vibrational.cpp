#include "dimercorr/vibrational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dimercorr/special_functions.hpp"
#include "dimercorr/units.hpp"

namespace dimercorr::vibrational {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

double beta_of(double temperature_k) {
  return temperature_k > 0.0 ? 1.0 / (units::kBoltzmannMevPerK * temperature_k) : 0.0;
}

double hf_peak(double omega, const HfMode& m) {
  if (omega <= 0.0) return 0.0;
  const double d = (omega - m.omega_mev) / m.gamma_mev;
  // Log form keeps w^3 * exp(...) finite far out in the tail.
  return m.alpha * std::exp(3.0 * std::log(omega) - d * d);
}

double hf_reorganization_unit(double omega_mev, double gamma_mev) {
  const double lo = std::max(0.0, omega_mev - 12.0 * gamma_mev);
  const double hi = omega_mev + 12.0 * gamma_mev;
  const HfMode unit{1.0, omega_mev, gamma_mev};
  auto f = [&](double w) { return w > 0.0 ? hf_peak(w, unit) / w : 0.0; };
  return gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-12);
}

}  // namespace

void VibrationalBath::validate() const {
  if (!(lambda0_mev >= 0.0)) throw std::invalid_argument("bath: lambda0_mev must be >= 0");
  if (!(omega_c_mev > 0.0)) throw std::invalid_argument("bath: omega_c_mev must be > 0");
  if (!(temperature_k >= 0.0)) throw std::invalid_argument("bath: temperature_k must be >= 0");
  for (std::size_t i = 0; i < hf_modes.size(); ++i) {
    const auto& m = hf_modes[i];
    const std::string tag = "bath: hf_modes[" + std::to_string(i) + "]";
    if (!(m.gamma_mev > 0.0)) throw std::invalid_argument(tag + ".gamma_mev must be > 0");
    if (!(m.omega_mev > 0.0)) throw std::invalid_argument(tag + ".omega_mev must be > 0");
    if (!(m.alpha >= 0.0)) throw std::invalid_argument(tag + ".alpha must be >= 0");
  }
}

HfMode hf_mode_from_reorganization(double lambda_mev, double omega_mev, double gamma_mev) {
  if (!(omega_mev > 0.0) || !(gamma_mev > 0.0) || !(lambda_mev >= 0.0)) {
    throw std::invalid_argument("hf mode: need lambda >= 0, omega > 0, gamma > 0");
  }
  return {lambda_mev / hf_reorganization_unit(omega_mev, gamma_mev), omega_mev, gamma_mev};
}

double spectral_density(double omega_mev, const VibrationalBath& bath) {
  if (omega_mev < 0.0) throw std::invalid_argument("spectral_density: negative frequency");
  const double x = omega_mev / bath.omega_c_mev;
  double j = x > 0.0 ? 0.5 * bath.lambda0_mev * std::exp(3.0 * std::log(x) - x) : 0.0;
  for (const auto& m : bath.hf_modes) j += hf_peak(omega_mev, m);
  return j;
}

double hf_mode_reorganization(const HfMode& mode) {
  return mode.alpha * hf_reorganization_unit(mode.omega_mev, mode.gamma_mev);
}

double reorganization_energy(const VibrationalBath& bath) {
  double total = bath.lambda0_mev;
  for (const auto& m : bath.hf_modes) total += hf_mode_reorganization(m);
  return total;
}

HfRenormalization hf_renormalization(const VibrationalBath& bath) {
  HfRenormalization out;
  for (const auto& m : bath.hf_modes) {
    const double lam = hf_mode_reorganization(m);
    out.lambda_h_mev += lam;
    out.kappa_h *= std::exp(-lam / (2.0 * m.omega_mev));
  }
  return out;
}

cd phonon_propagator(double t_ps, const VibrationalBath& bath) {
  bath.validate();
  if (bath.lambda0_mev == 0.0) return 0.0;
  const double tau = t_ps / units::kHbarMevPs;
  const double wc = bath.omega_c_mev;
  const double amp = bath.lambda0_mev / (2.0 * wc * wc * wc);
  const double beta = beta_of(bath.temperature_k);

  // J / w^2 = amp * w * exp(-w / wc); w coth(beta w / 2) -> 2 / beta as w -> 0.
  auto w_coth = [&](double w) {
    if (beta == 0.0) return w;
    const double x = 0.5 * beta * w;
    if (x < 1e-6) return (2.0 / beta) * (1.0 + x * x / 3.0);
    return w / std::tanh(x);
  };
  auto re = [&](double w) { return amp * std::exp(-w / wc) * w_coth(w) * std::cos(w * tau); };
  auto im = [&](double w) { return -amp * w * std::exp(-w / wc) * std::sin(w * tau); };

  const double hi = 40.0 * wc;
  double err_re = 0.0, err_im = 0.0, l1_re = 0.0, l1_im = 0.0;
  const double vr = gauss_kronrod<double, 61>::integrate(re, 0.0, hi, 25, 1e-10, &err_re, &l1_re);
  const double vi = gauss_kronrod<double, 61>::integrate(im, 0.0, hi, 25, 1e-10, &err_im, &l1_im);
  const double scale = std::max(l1_re, l1_im);
  if (err_re > 1e-8 * scale || err_im > 1e-8 * scale) {
    throw std::runtime_error("phonon_propagator: quadrature did not converge at t = " + std::to_string(t_ps) +
                             " ps (error estimates " + std::to_string(err_re) + ", " + std::to_string(err_im) +
                             ")");
  }
  return {vr, vi};
}

double kappa0(const VibrationalBath& bath) { return PhononFunctions(bath).kappa0(); }

PhononFunctions::PhononFunctions(const VibrationalBath& bath, double scale) {
  bath.validate();
  if (!(scale > 0.0)) throw std::invalid_argument("PhononFunctions: scale must be > 0");
  lambda0_ = bath.lambda0_mev;
  omega_c_ = bath.omega_c_mev;
  temperature_ = bath.temperature_k;
  scale_ = scale;
  amplitude_ = lambda0_ / (2.0 * omega_c_ * omega_c_ * omega_c_);
  beta_ = beta_of(temperature_);
  hf_ = hf_renormalization(bath);
  lambda_total_ = lambda0_ + hf_.lambda_h_mev;

  phi0_ = phi_tau(0.0).real();
  kappa_ = std::exp(-0.5 * phi0_);
  kappa0_ = std::exp(-0.5 * phi0_ / scale_);

  t_max_ps_ = 0.0;
  if (phi0_ > 0.0) {
    double t = units::kHbarMevPs / omega_c_;
    while (std::abs(phi_tau(t / units::kHbarMevPs)) >= 1e-8 * phi0_ && t < 1e9) t *= 2.0;
    t_max_ps_ = t;
  }
}

cd PhononFunctions::phi_tau(double tau) const {
  if (lambda0_ == 0.0) return 0.0;
  const cd z(1.0 / omega_c_, tau);
  cd out = amplitude_ / (z * z);
  if (beta_ > 0.0) {
    out += (2.0 * amplitude_ / (beta_ * beta_)) * special::trigamma(1.0 + z / beta_).real();
  }
  return scale_ * out;
}

cd PhononFunctions::phi(double t_ps) const { return phi_tau(t_ps / units::kHbarMevPs); }

PhononFunctions PhononFunctions::pair() const {
  PhononFunctions p = *this;
  p.scale_ = 2.0 * scale_;
  p.phi0_ = 2.0 * phi0_;
  p.kappa_ = std::exp(-0.5 * p.phi0_);
  return p;
}

// The E2 tail correction is accurate well beyond this bound.
constexpr double kTailTol = 1e-6;
cd coupling_rate(double omega_mev, const PhononFunctions& phonon, Combo combo) {
  if (phonon.trivial()) return 0.0;
  const double sign = combo == Combo::kSameOp ? -1.0 : 1.0;
  const double k2 = phonon.kappa() * phonon.kappa();
  const double hbar = units::kHbarMevPs;
  auto g = [&](double tau) { return k2 * (std::exp(sign * phonon.phi(tau * hbar)) - 1.0); };
  auto f = [&](double tau) { return std::exp(cd(0.0, omega_mev * tau)) * g(tau); };

  const double a = 1.0 / phonon.omega_c();
  const double beta = phonon.temperature() > 0.0 ? 1.0 / (units::kBoltzmannMevPerK * phonon.temperature()) : a;
  const double w_abs = std::abs(omega_mev);
  double width = 0.25 * std::min(a, beta);
  const double floor = 1e-9 * k2 * phonon.phi0() * a;

  cd acc = 0.0;
  double t0 = 0.0;
  for (int panel = 0; panel < 400000; ++panel) {
    const double t1 = t0 + width;
    const int sub = std::max(1, static_cast<int>(std::ceil(w_abs * width / units::kPi)));
    const double h = width / sub;
    for (int s = 0; s < sub; ++s) {
      const double lo = t0 + s * h;
      auto re = [&](double t) { return f(t).real(); };
      auto im = [&](double t) { return f(t).imag(); };
      acc += cd(gauss<double, 20>::integrate(re, lo, lo + h), gauss<double, 20>::integrate(im, lo, lo + h));
    }
    t0 = t1;
    const cd gt = g(t0);
    const double tail = std::abs(gt) * t0 * (w_abs > 0.0 ? std::min(1.0, 2.0 / (w_abs * t0)) : 1.0);
    if (tail < kTailTol * std::abs(acc) + floor) {
      // g ~ 1/t^2 at long times: int_T^inf e^{iwt} g(T) (T/t)^2 dt = g(T) T E2(-iwT)
      acc += gt * t0 * special::expint_e2(cd(0.0, -omega_mev * t0));
      return hbar * acc;
    }
    width *= 1.25;
  }
  throw std::runtime_error("coupling_rate: time integral did not settle at omega = " + std::to_string(omega_mev) +
                           " meV (|e^phi - 1| tail too large)");
}

}  // namespace dimercorr::vibrational
