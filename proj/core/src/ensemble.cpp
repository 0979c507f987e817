#include "dimercorr/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "dimercorr/dynamics.hpp"
#include "dimercorr/observables.hpp"
#include "dimercorr/units.hpp"
#include "dimercorr/vibrational.hpp"

namespace dimercorr::ensemble {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::pair<Vec3, Vec3> tangent_basis(const Vec3& u) {
  const Vec3 trial = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = (trial - u * u.dot(trial)).normalized();
  return {e1, u.cross(e1)};
}

bool orientation_disorder(double kappa) { return kappa > 0.0 && std::isfinite(kappa); }

struct Sample {
  bool ok = false;
  std::string error;
  std::vector<double> coincidences;
  double singles_q = 0.0;
  double singles_q_prime = 0.0;
};

}  // namespace

std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vec3 sample_uniform_sphere(Rng& rng) {
  const double z = 2.0 * uniform01(rng) - 1.0;
  const double phi = 2.0 * units::kPi * uniform01(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

Vec3 sample_vmf(const Vec3& mean, double kappa, Rng& rng) {
  if (!(kappa > 0.0)) throw std::invalid_argument("sample_vmf: kappa must be > 0");
  if (!(mean.norm() > 0.0)) throw std::invalid_argument("sample_vmf: zero mean direction");
  const Vec3 mu = mean.normalized();
  const double u = uniform01(rng);
  // Inverse CDF of t = cos(angle): t = 1 + log(u + (1 - u) e^{-2 kappa}) / kappa
  double t = 1.0 + std::log1p(-(1.0 - u) * (-std::expm1(-2.0 * kappa))) / kappa;
  t = std::clamp(t, -1.0, 1.0);
  const double psi = 2.0 * units::kPi * uniform01(rng);
  const auto [e1, e2] = tangent_basis(mu);
  const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
  return (t * mu + s * (std::cos(psi) * e1 + std::sin(psi) * e2)).normalized();
}

double vmf_angle_cdf(double kappa, double angle_rad) {
  const double c = std::cos(angle_rad);
  return std::expm1(kappa * (c - 1.0)) / std::expm1(-2.0 * kappa);
}

void DisorderSpec::validate() const {
  if (n_samples < 1) throw std::invalid_argument("disorder: n_samples must be >= 1");
  if (std::isnan(kappa_orient)) throw std::invalid_argument("disorder: kappa_orient is NaN");
  if (scheme == DetectionScheme::kHeavy && !(kappa_detect > 0.0)) {
    throw std::invalid_argument("disorder: kappa_detect must be > 0");
  }
  if (scheme == DetectionScheme::kFixed && (!(q.norm() > 0.0) || !(q_prime.norm() > 0.0))) {
    throw std::invalid_argument("disorder: fixed detection directions must be nonzero");
  }
  if (threads < 1) throw std::invalid_argument("disorder: threads must be >= 1");
  if (!(max_failure_fraction >= 0.0)) throw std::invalid_argument("disorder: max_failure_fraction must be >= 0");
}

std::pair<Vec3, Vec3> sample_detection(const DisorderSpec& spec, Rng& rng) {
  switch (spec.scheme) {
    case DetectionScheme::kFixed:
      return {spec.q, spec.q_prime};
    case DetectionScheme::kHeavy: {
      const Vec3 first = sample_uniform_sphere(rng);
      return {first, sample_vmf(first, spec.kappa_detect, rng)};
    }
    case DetectionScheme::kLight: {
      const Vec3 first = sample_uniform_sphere(rng);
      return {first, sample_uniform_sphere(rng)};
    }
  }
  throw std::logic_error("sample_detection: unknown scheme");
}

EnsembleResult ensemble_g2(const liouvillian::SystemConfig& base, const DisorderSpec& spec,
                           const std::vector<double>& tau_grid) {
  spec.validate();
  base.validate();
  if (tau_grid.empty()) throw std::invalid_argument("ensemble: empty tau grid");
  const vibrational::PhononFunctions phonon(base.bath);
  const int n = spec.n_samples;
  std::vector<Sample> samples(n);

  auto run_one = [&](int i) {
    Sample& out = samples[i];
    try {
      Rng rng(sample_seed(spec.seed, static_cast<std::uint64_t>(i)));
      liouvillian::SystemConfig cfg = base;
      if (orientation_disorder(spec.kappa_orient)) {
        auto& g = cfg.geometry;
        if (spec.perturbed == Perturbed::kBoth) {
          g.mu1_debye = g.mu1_debye.norm() * sample_vmf(g.mu1_debye, spec.kappa_orient, rng);
        }
        g.mu2_debye = g.mu2_debye.norm() * sample_vmf(g.mu2_debye, spec.kappa_orient, rng);
      }
      const auto [q, qp] = sample_detection(spec, rng);
      const auto liou = liouvillian::assemble(cfg, phonon);
      const auto ss = dynamics::steady_state(liou.matrix);
      const dynamics::Propagator prop(liou.matrix);
      const auto curve = observables::g2_curve(prop, ss.rho, cfg.geometry, geometry::DetectionMode::from_direction(q),
                                               geometry::DetectionMode::from_direction(qp), tau_grid);
      out.coincidences = curve.coincidences;
      out.singles_q = curve.singles_q;
      out.singles_q_prime = curve.singles_q_prime;
      out.ok = true;
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
  };

  const int threads = std::min(spec.threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < n; i += threads) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  EnsembleResult res;
  res.tau_ps = tau_grid;
  for (int i = 0; i < n; ++i) {
    if (samples[i].ok) {
      ++res.accepted;
    } else {
      ++res.failed;
      res.failures.push_back(std::to_string(i) + ": " + samples[i].error);
    }
  }
  if (res.accepted == 0 || res.failed > spec.max_failure_fraction * n) {
    throw std::runtime_error("ensemble: " + std::to_string(res.failed) + " of " + std::to_string(n) +
                             " samples failed" + (res.failures.empty() ? "" : " (first: " + res.failures[0] + ")"));
  }

  const std::size_t nt = tau_grid.size();
  const double m = res.accepted;
  std::vector<double> mean_g(nt, 0.0);
  double mean_i = 0.0, mean_ip = 0.0, mean_prod = 0.0;
  for (const auto& s : samples) {
    if (!s.ok) continue;
    for (std::size_t k = 0; k < nt; ++k) mean_g[k] += s.coincidences[k] / m;
    mean_i += s.singles_q / m;
    mean_ip += s.singles_q_prime / m;
    mean_prod += s.singles_q * s.singles_q_prime / m;
  }
  res.mean_singles_q = mean_i;
  res.mean_singles_q_prime = mean_ip;
  res.mean.assign(nt, 0.0);
  res.std_error.assign(nt, 0.0);

  for (std::size_t k = 0; k < nt; ++k) {
    // Influence values z_i; the standard error is their sample deviation / sqrt(m).
    std::vector<double> z;
    z.reserve(res.accepted);
    double f = 0.0;
    switch (spec.normalization) {
      case Normalization::kSinglesProduct:
        f = mean_g[k] / (mean_i * mean_ip);
        for (const auto& s : samples)
          if (s.ok)
            z.push_back(s.coincidences[k] / (mean_i * mean_ip) - f * s.singles_q / mean_i -
                        f * s.singles_q_prime / mean_ip);
        break;
      case Normalization::kAccidentals:
        f = mean_g[k] / mean_prod;
        for (const auto& s : samples)
          if (s.ok) z.push_back(s.coincidences[k] / mean_prod - f * s.singles_q * s.singles_q_prime / mean_prod);
        break;
      case Normalization::kPerSample:
        for (const auto& s : samples)
          if (s.ok) z.push_back(s.coincidences[k] / (s.singles_q * s.singles_q_prime));
        for (double v : z) f += v / m;
        break;
    }
    res.mean[k] = f;
    if (res.accepted > 1) {
      double zm = 0.0;
      for (double v : z) zm += v / m;
      double var = 0.0;
      for (double v : z) var += (v - zm) * (v - zm);
      var /= (m - 1.0);
      res.std_error[k] = std::sqrt(var / m);
    }
  }
  return res;
}

}  // namespace dimercorr::ensemble
