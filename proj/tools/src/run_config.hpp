#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dimercorr/ensemble.hpp"
#include "dimercorr/liouvillian.hpp"

namespace dimercorr::app {

using Json = nlohmann::json;

// Malformed or invalid configuration; `what()` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class RequestKind { kIntensity, kG2, kSpectrum, kTemperatureSweep, kEnsemble, kIrfSweep };

std::string to_string(RequestKind kind);

// Detection direction as written in the config: a vector, angles, or a
// keyword resolved against the geometry ("perpendicular", "mu1", "mu2").
struct DirectionSpec {
  std::string keyword = "perpendicular";
  std::optional<Vec3> vector;
};

struct Request {
  RequestKind kind = RequestKind::kG2;
  std::string name;  // output file stem

  std::vector<double> grid;  // tau_ps, t_ps, omega_rel_mev or temperature_k
  DirectionSpec q;
  DirectionSpec q_prime;

  // intensity
  std::string initial_state = "ee";
  bool pump = false;

  // spectrum
  double broadening_mev = 0.0;
  bool phonon_sideband = true;

  // ensemble, irf-sweep
  std::optional<ensemble::DisorderSpec> disorder;
  std::vector<double> delta_tau_ps;
};

struct RunConfig {
  liouvillian::SystemConfig system;
  std::vector<Request> requests;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string format = "csv";
};

struct Overrides {
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> format;
};

// Parses, applies overrides, fills every default (grids included) and
// validates. A sidecar written by `run` is accepted as input.
RunConfig parse_run_config(const Json& doc, const Overrides& overrides = {});
RunConfig load_run_config(const std::string& path, const Overrides& overrides = {});

// Fully explicit form; parse_run_config(to_json(c)) reproduces c exactly.
Json to_json(const RunConfig& config);
Json to_json(const liouvillian::SystemConfig& config);

Vec3 resolve_direction(const DirectionSpec& spec, const geometry::DimerGeometry& geom);

}  // namespace dimercorr::app
