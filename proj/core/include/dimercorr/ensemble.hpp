#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dimercorr/geometry.hpp"
#include "dimercorr/liouvillian.hpp"
#include "dimercorr/types.hpp"

namespace dimercorr::ensemble {

using Rng = std::mt19937_64;

// Seed of sample `index` derived from the master seed (splitmix64 mixing).
std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index);

// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

Vec3 sample_uniform_sphere(Rng& rng);

// von Mises-Fisher on the unit sphere around `mean` (normalized internally).
Vec3 sample_vmf(const Vec3& mean, double kappa, Rng& rng);

// P(angle to the mean < angle) for the vMF distribution.
double vmf_angle_cdf(double kappa, double angle_rad);

enum class DetectionScheme {
  kFixed,     // configured pair
  kHeavy,     // first uniform, second vMF around the first
  kLight,     // both uniform and independent
};

enum class Normalization {
  kSinglesProduct,  // <G2> / (<I_q> <I_q'>)
  kAccidentals,     // <G2> / <I_q I_q'>
  kPerSample,       // <G2 / (I_q I_q')>
};

enum class Perturbed { kSecond, kBoth };

struct DisorderSpec {
  double kappa_orient = 10.0;  // <= 0 or infinite disables orientation disorder
  DetectionScheme scheme = DetectionScheme::kFixed;
  double kappa_detect = 50.0;
  Vec3 q = Vec3::UnitY();        // fixed-scheme first detector
  Vec3 q_prime = Vec3::UnitY();  // fixed-scheme second detector
  Perturbed perturbed = Perturbed::kSecond;
  Normalization normalization = Normalization::kAccidentals;
  int n_samples = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  double max_failure_fraction = 0.05;

  void validate() const;  // throws std::invalid_argument
};

std::pair<Vec3, Vec3> sample_detection(const DisorderSpec& spec, Rng& rng);

struct EnsembleResult {
  std::vector<double> tau_ps;
  std::vector<double> mean;
  std::vector<double> std_error;
  int accepted = 0;
  int failed = 0;
  std::vector<std::string> failures;  // "index: message"
  double mean_singles_q = 0.0;
  double mean_singles_q_prime = 0.0;
};

// One disordered realization per sample; the bath is shared. Deterministic in
// (config, spec) regardless of thread count. Throws std::runtime_error when
// the failure fraction exceeds spec.max_failure_fraction.
EnsembleResult ensemble_g2(const liouvillian::SystemConfig& base, const DisorderSpec& spec,
                           const std::vector<double>& tau_grid);

}  // namespace dimercorr::ensemble
