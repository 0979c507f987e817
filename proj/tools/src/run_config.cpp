#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "dimercorr/observables.hpp"
#include "dimercorr/presets.hpp"
#include "dimercorr/units.hpp"

namespace dimercorr::app {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.count(key)) fail(path + "." + key, "unknown key");
}

double get_number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

void read_number(const Json& obj, const char* key, const std::string& path, double& out) {
  if (obj.contains(key)) out = get_number(obj.at(key), path + "." + key);
}

void read_bool(const Json& obj, const char* key, const std::string& path, bool& out) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_boolean()) fail(path + "." + key, "expected true or false");
  out = obj.at(key).get<bool>();
}

std::string get_string(const Json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Vec3 get_vec3(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) fail(path, "expected an array of 3 numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) out[i] = get_number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return out;
}

std::vector<double> parse_grid(const Json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], path + "[" + std::to_string(i) + "]"));
  } else if (v.is_object()) {
    check_keys(v, path, {"start", "stop", "points", "step", "spacing"});
    if (!v.contains("start") || !v.contains("stop")) fail(path, "range needs start and stop");
    const double a = get_number(v.at("start"), path + ".start");
    const double b = get_number(v.at("stop"), path + ".stop");
    const std::string spacing = v.contains("spacing") ? get_string(v.at("spacing"), path + ".spacing") : "linear";
    if (v.contains("step")) {
      if (spacing != "linear") fail(path + ".step", "step requires linear spacing");
      const double h = get_number(v.at("step"), path + ".step");
      if (!(h > 0.0)) fail(path + ".step", "must be positive");
      const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
      if (n < 1 || n > 10'000'000) fail(path, "step gives an unusable number of points");
      for (long i = 0; i < n; ++i) out.push_back(a + h * static_cast<double>(i));
    } else {
      if (!v.contains("points")) fail(path, "range needs points or step");
      if (!v.at("points").is_number_integer() || v.at("points").get<long>() < 1)
        fail(path + ".points", "expected a positive integer");
      const int n = v.at("points").get<int>();
      if (spacing == "linear") {
        out = linspace(a, b, n);
      } else if (spacing == "log") {
        if (!(a > 0.0 && b > 0.0)) fail(path, "log spacing needs positive start and stop");
        for (double x : linspace(std::log(a), std::log(b), n)) out.push_back(std::exp(x));
        out.front() = a;
        out.back() = b;
      } else {
        fail(path + ".spacing", "expected linear or log");
      }
    }
  } else {
    fail(path, "expected an array or a range object");
  }
  if (out.empty()) fail(path, "grid is empty");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1])) fail(path, "grid must be strictly increasing");
  return out;
}

DirectionSpec parse_direction(const Json& v, const std::string& path) {
  DirectionSpec d;
  if (v.is_string()) {
    d.keyword = v.get<std::string>();
    if (d.keyword != "perpendicular" && d.keyword != "mu1" && d.keyword != "mu2")
      fail(path, "expected perpendicular, mu1, mu2, a vector or {theta_deg, phi_deg}");
  } else if (v.is_array()) {
    d.keyword.clear();
    d.vector = get_vec3(v, path);
    if (d.vector->norm() == 0.0) fail(path, "direction must be nonzero");
  } else if (v.is_object()) {
    check_keys(v, path, {"theta_deg", "phi_deg"});
    double theta = 0.0, phi = 0.0;
    read_number(v, "theta_deg", path, theta);
    read_number(v, "phi_deg", path, phi);
    theta *= units::kPi / 180.0;
    phi *= units::kPi / 180.0;
    d.keyword.clear();
    d.vector = Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
  } else {
    fail(path, "expected a direction");
  }
  return d;
}

Json direction_json(const DirectionSpec& d) { return d.vector ? vec_json(*d.vector) : Json(d.keyword); }

void parse_system(const Json& sys, const std::string& path, liouvillian::SystemConfig& c,
                  std::optional<double>& nonrad_rel, std::optional<double>& eea_rel) {
  check_keys(sys, path,
             {"mu1_debye", "mu2_debye", "r_nm", "omega_s_ev", "optical_temperature_k", "pump_rate_per_ps",
              "pump_direction", "nonrad_rate_per_ps", "nonrad_rate_rel_radiative", "eea_rate_per_ps",
              "eea_rate_rel_radiative", "coupling_override_mev", "optical_dressing", "allow_unequal_dipoles"});
  if (sys.contains("mu1_debye")) c.geometry.mu1_debye = get_vec3(sys.at("mu1_debye"), path + ".mu1_debye");
  if (sys.contains("mu2_debye")) c.geometry.mu2_debye = get_vec3(sys.at("mu2_debye"), path + ".mu2_debye");
  if (sys.contains("r_nm")) c.geometry.r_nm = get_vec3(sys.at("r_nm"), path + ".r_nm");
  read_number(sys, "omega_s_ev", path, c.geometry.omega_s_ev);
  read_number(sys, "optical_temperature_k", path, c.optical_temperature_k);
  read_number(sys, "nonrad_rate_per_ps", path, c.nonrad_rate_per_ps);
  read_number(sys, "eea_rate_per_ps", path, c.eea_rate_per_ps);
  auto optional_number = [&](const char* key, std::optional<double>& out) {
    if (!sys.contains(key)) return;
    if (sys.at(key).is_null()) out.reset();
    else out = get_number(sys.at(key), path + "." + key);
  };
  optional_number("pump_rate_per_ps", c.pump_rate_per_ps);
  optional_number("coupling_override_mev", c.coupling_override_mev);
  optional_number("nonrad_rate_rel_radiative", nonrad_rel);
  optional_number("eea_rate_rel_radiative", eea_rel);
  if (sys.contains("pump_direction")) {
    if (sys.at("pump_direction").is_null()) c.pump_direction.reset();
    else c.pump_direction = get_vec3(sys.at("pump_direction"), path + ".pump_direction");
  }
  if (sys.contains("optical_dressing")) {
    const auto s = get_string(sys.at("optical_dressing"), path + ".optical_dressing");
    if (s == "local") c.optical_dressing = liouvillian::OpticalDressing::kLocal;
    else if (s == "quartic") c.optical_dressing = liouvillian::OpticalDressing::kQuartic;
    else fail(path + ".optical_dressing", "expected local or quartic");
  }
  read_bool(sys, "allow_unequal_dipoles", path, c.allow_unequal_dipoles);
}

void parse_bath(const Json& b, const std::string& path, vibrational::VibrationalBath& bath) {
  check_keys(b, path, {"lambda0_mev", "omega_c_mev", "temperature_k", "hf_modes"});
  read_number(b, "lambda0_mev", path, bath.lambda0_mev);
  read_number(b, "omega_c_mev", path, bath.omega_c_mev);
  read_number(b, "temperature_k", path, bath.temperature_k);
  if (b.contains("hf_modes")) {
    const auto& modes = b.at("hf_modes");
    if (!modes.is_array()) fail(path + ".hf_modes", "expected an array");
    bath.hf_modes.clear();
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const std::string p = path + ".hf_modes[" + std::to_string(i) + "]";
      const auto& m = modes[i];
      check_keys(m, p, {"alpha_per_mev2", "lambda_mev", "omega_mev", "gamma_mev"});
      if (!m.contains("omega_mev")) fail(p, "omega_mev is required");
      vibrational::HfMode mode;
      mode.omega_mev = get_number(m.at("omega_mev"), p + ".omega_mev");
      read_number(m, "gamma_mev", p, mode.gamma_mev);
      if (m.contains("alpha_per_mev2") == m.contains("lambda_mev")) fail(p, "give exactly one of alpha_per_mev2, lambda_mev");
      if (m.contains("alpha_per_mev2")) {
        mode.alpha = get_number(m.at("alpha_per_mev2"), p + ".alpha_per_mev2");
      } else {
        const double lam = get_number(m.at("lambda_mev"), p + ".lambda_mev");
        try {
          mode = vibrational::hf_mode_from_reorganization(lam, mode.omega_mev, mode.gamma_mev);
        } catch (const std::exception& e) {
          fail(p, e.what());
        }
      }
      bath.hf_modes.push_back(mode);
    }
  }
}

void parse_flags(const Json& f, const std::string& path, liouvillian::Flags& flags) {
  check_keys(f, path, {"lamb_shifts", "secular", "rotating_frame", "include_phases"});
  read_bool(f, "lamb_shifts", path, flags.lamb_shifts);
  read_bool(f, "secular", path, flags.secular);
  read_bool(f, "rotating_frame", path, flags.rotating_frame);
  read_bool(f, "include_phases", path, flags.include_phases);
}

ensemble::DisorderSpec parse_disorder(const Json& d, const std::string& path) {
  check_keys(d, path,
             {"kappa_orient", "scheme", "kappa_detect", "perturbed", "normalization", "n_samples",
              "max_failure_fraction"});
  ensemble::DisorderSpec s;
  read_number(d, "kappa_orient", path, s.kappa_orient);
  read_number(d, "kappa_detect", path, s.kappa_detect);
  read_number(d, "max_failure_fraction", path, s.max_failure_fraction);
  if (d.contains("scheme")) {
    const auto v = get_string(d.at("scheme"), path + ".scheme");
    if (v == "fixed") s.scheme = ensemble::DetectionScheme::kFixed;
    else if (v == "heavy") s.scheme = ensemble::DetectionScheme::kHeavy;
    else if (v == "light") s.scheme = ensemble::DetectionScheme::kLight;
    else fail(path + ".scheme", "expected fixed, heavy or light");
  }
  if (d.contains("perturbed")) {
    const auto v = get_string(d.at("perturbed"), path + ".perturbed");
    if (v == "second") s.perturbed = ensemble::Perturbed::kSecond;
    else if (v == "both") s.perturbed = ensemble::Perturbed::kBoth;
    else fail(path + ".perturbed", "expected second or both");
  }
  if (d.contains("normalization")) {
    const auto v = get_string(d.at("normalization"), path + ".normalization");
    if (v == "accidentals") s.normalization = ensemble::Normalization::kAccidentals;
    else if (v == "singles-product") s.normalization = ensemble::Normalization::kSinglesProduct;
    else if (v == "per-sample") s.normalization = ensemble::Normalization::kPerSample;
    else fail(path + ".normalization", "expected accidentals, singles-product or per-sample");
  }
  if (d.contains("n_samples")) {
    if (!d.at("n_samples").is_number_integer()) fail(path + ".n_samples", "expected an integer");
    s.n_samples = d.at("n_samples").get<int>();
  }
  return s;
}

Json disorder_json(const ensemble::DisorderSpec& s) {
  const char* scheme[] = {"fixed", "heavy", "light"};
  const char* norm[] = {"singles-product", "accidentals", "per-sample"};
  return Json{{"kappa_orient", s.kappa_orient},
              {"scheme", scheme[static_cast<int>(s.scheme)]},
              {"kappa_detect", s.kappa_detect},
              {"perturbed", s.perturbed == ensemble::Perturbed::kBoth ? "both" : "second"},
              {"normalization", norm[static_cast<int>(s.normalization)]},
              {"n_samples", s.n_samples},
              {"max_failure_fraction", s.max_failure_fraction}};
}

RequestKind parse_kind(const std::string& s, const std::string& path) {
  if (s == "intensity") return RequestKind::kIntensity;
  if (s == "g2") return RequestKind::kG2;
  if (s == "spectrum") return RequestKind::kSpectrum;
  if (s == "temperature-sweep") return RequestKind::kTemperatureSweep;
  if (s == "ensemble") return RequestKind::kEnsemble;
  if (s == "irf-sweep") return RequestKind::kIrfSweep;
  fail(path, "unknown kind '" + s + "' (intensity, g2, spectrum, temperature-sweep, ensemble, irf-sweep)");
}

const char* grid_key(RequestKind kind) {
  switch (kind) {
    case RequestKind::kIntensity: return "t_ps";
    case RequestKind::kSpectrum: return "omega_rel_mev";
    case RequestKind::kTemperatureSweep: return "temperature_k";
    default: return "tau_ps";
  }
}

Request parse_request(const Json& r, const std::string& path, const liouvillian::Metadata& meta) {
  if (!r.is_object() || !r.contains("kind")) fail(path, "request needs a kind");
  Request req;
  req.kind = parse_kind(get_string(r.at("kind"), path + ".kind"), path + ".kind");
  switch (req.kind) {
    case RequestKind::kIntensity:
      check_keys(r, path, {"kind", "name", "t_ps", "q", "initial_state", "pump"});
      break;
    case RequestKind::kG2:
      check_keys(r, path, {"kind", "name", "tau_ps", "q", "q_prime"});
      break;
    case RequestKind::kSpectrum:
      check_keys(r, path, {"kind", "name", "omega_rel_mev", "broadening_mev", "phonon_sideband"});
      break;
    case RequestKind::kTemperatureSweep:
      check_keys(r, path, {"kind", "name", "temperature_k", "q", "q_prime"});
      break;
    case RequestKind::kEnsemble:
      check_keys(r, path, {"kind", "name", "tau_ps", "q", "q_prime", "disorder"});
      break;
    case RequestKind::kIrfSweep:
      check_keys(r, path, {"kind", "name", "tau_ps", "q", "q_prime", "delta_tau_ps", "disorder"});
      break;
  }
  req.name = r.contains("name") ? get_string(r.at("name"), path + ".name") : to_string(req.kind);
  if (req.name.empty() || req.name.find_first_of("/\\") != std::string::npos || req.name[0] == '.')
    fail(path + ".name", "must be a plain file stem");

  const char* gk = grid_key(req.kind);
  if (r.contains(gk)) {
    req.grid = parse_grid(r.at(gk), path + "." + gk);
  } else {
    const double gamma = meta.local_decay_per_ps;
    switch (req.kind) {
      case RequestKind::kIntensity: req.grid = linspace(0.0, 10.0 / gamma, 501); break;
      case RequestKind::kSpectrum: req.grid = linspace(-150.0, 100.0, 2501); break;
      case RequestKind::kTemperatureSweep: req.grid = linspace(0.0, 300.0, 13); break;
      default: req.grid = observables::default_tau_grid(meta.coupling_prime_mev, gamma); break;
    }
  }
  if ((req.kind == RequestKind::kG2 || req.kind == RequestKind::kEnsemble || req.kind == RequestKind::kIrfSweep ||
       req.kind == RequestKind::kIntensity) && req.grid.front() < 0.0)
    fail(path + "." + gk, "times must be non-negative");
  if (req.kind == RequestKind::kIrfSweep && req.grid.front() != 0.0)
    fail(path + ".tau_ps", "instrument-response sweeps need a grid starting at 0");
  if (req.kind == RequestKind::kTemperatureSweep && req.grid.front() < 0.0)
    fail(path + ".temperature_k", "temperatures must be non-negative");

  if (r.contains("q")) req.q = parse_direction(r.at("q"), path + ".q");
  req.q_prime = r.contains("q_prime") ? parse_direction(r.at("q_prime"), path + ".q_prime") : req.q;

  if (r.contains("initial_state")) {
    req.initial_state = get_string(r.at("initial_state"), path + ".initial_state");
    static const std::set<std::string> states = {"ee", "eg", "ge", "symmetric", "antisymmetric", "steady"};
    if (!states.count(req.initial_state))
      fail(path + ".initial_state", "expected ee, eg, ge, symmetric, antisymmetric or steady");
  }
  read_bool(r, "pump", path, req.pump);
  read_number(r, "broadening_mev", path, req.broadening_mev);
  if (req.broadening_mev < 0.0) fail(path + ".broadening_mev", "must be non-negative");
  read_bool(r, "phonon_sideband", path, req.phonon_sideband);

  if (req.kind == RequestKind::kEnsemble) req.disorder = ensemble::DisorderSpec{};
  if (r.contains("disorder")) {
    req.disorder = parse_disorder(r.at("disorder"), path + ".disorder");
  }
  if (req.kind == RequestKind::kIrfSweep) {
    req.delta_tau_ps = r.contains("delta_tau_ps") ? parse_grid(r.at("delta_tau_ps"), path + ".delta_tau_ps")
                                                  : std::vector<double>{50.0, 100.0, 200.0};
    if (req.delta_tau_ps.front() <= 0.0) fail(path + ".delta_tau_ps", "widths must be positive");
  }
  return req;
}

}  // namespace

std::string to_string(RequestKind kind) {
  switch (kind) {
    case RequestKind::kIntensity: return "intensity";
    case RequestKind::kG2: return "g2";
    case RequestKind::kSpectrum: return "spectrum";
    case RequestKind::kTemperatureSweep: return "temperature-sweep";
    case RequestKind::kEnsemble: return "ensemble";
    case RequestKind::kIrfSweep: return "irf-sweep";
  }
  return "?";
}

Vec3 resolve_direction(const DirectionSpec& spec, const geometry::DimerGeometry& geom) {
  if (spec.vector) return spec.vector->normalized();
  if (spec.keyword == "mu1") return geom.mu1_debye.normalized();
  if (spec.keyword == "mu2") return geom.mu2_debye.normalized();
  return geometry::perpendicular_direction(geom);
}

RunConfig parse_run_config(const Json& input, const Overrides& overrides) {
  // A sidecar nests the resolved config.
  const Json& doc = input.is_object() && input.contains("config") && input.contains("version") ? input.at("config")
                                                                                              : input;
  check_keys(doc, "config", {"preset", "seed", "threads", "format", "system", "bath", "flags", "requests"});

  RunConfig rc;
  std::optional<std::string> preset;
  if (doc.contains("preset")) preset = get_string(doc.at("preset"), "config.preset");
  if (overrides.preset) preset = overrides.preset;
  if (preset) {
    try {
      rc.system = presets::get(*preset).config;
    } catch (const std::invalid_argument& e) {
      fail("config.preset", e.what());
    }
  }

  std::optional<double> nonrad_rel, eea_rel;
  if (doc.contains("system")) parse_system(doc.at("system"), "config.system", rc.system, nonrad_rel, eea_rel);
  if (doc.contains("bath")) parse_bath(doc.at("bath"), "config.bath", rc.system.bath);
  if (doc.contains("flags")) parse_flags(doc.at("flags"), "config.flags", rc.system.flags);

  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) fail("config.seed", "expected a non-negative integer");
    rc.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (overrides.seed) rc.seed = *overrides.seed;
  if (doc.contains("threads")) {
    if (!doc.at("threads").is_number_integer()) fail("config.threads", "expected an integer");
    rc.threads = doc.at("threads").get<int>();
  }
  if (overrides.threads) rc.threads = *overrides.threads;
  if (rc.threads < 1) fail("config.threads", "must be at least 1");
  if (doc.contains("format")) rc.format = get_string(doc.at("format"), "config.format");
  if (overrides.format) rc.format = *overrides.format;
  if (rc.format != "csv" && rc.format != "json") fail("config.format", "expected csv or json");

  try {
    rc.system.validate();
  } catch (const std::invalid_argument& e) {
    fail("config.system", e.what());
  }

  liouvillian::Metadata meta;
  try {
    meta = liouvillian::assemble(rc.system).meta;
  } catch (const std::exception& e) {
    fail("config.system", std::string("cannot build the generator: ") + e.what());
  }
  if (nonrad_rel) {
    if (*nonrad_rel < 0.0) fail("config.system.nonrad_rate_rel_radiative", "must be non-negative");
    rc.system.nonrad_rate_per_ps = *nonrad_rel * meta.local_decay_per_ps;
  }
  if (eea_rel) {
    if (*eea_rel < 0.0) fail("config.system.eea_rate_rel_radiative", "must be non-negative");
    rc.system.eea_rate_per_ps = *eea_rel * meta.local_decay_per_ps;
  }
  try {
    rc.system.validate();
  } catch (const std::invalid_argument& e) {
    fail("config.system", e.what());
  }

  if (!doc.contains("requests")) fail("config.requests", "at least one request is required");
  const auto& reqs = doc.at("requests");
  if (!reqs.is_array() || reqs.empty()) fail("config.requests", "expected a non-empty array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const std::string path = "config.requests[" + std::to_string(i) + "]";
    Request req = parse_request(reqs[i], path, meta);
    if (!names.insert(req.name).second) fail(path + ".name", "duplicate output name '" + req.name + "'");
    if (req.disorder) {
      req.disorder->seed = rc.seed;
      req.disorder->threads = rc.threads;
      req.disorder->q = resolve_direction(req.q, rc.system.geometry);
      req.disorder->q_prime = resolve_direction(req.q_prime, rc.system.geometry);
      try {
        req.disorder->validate();
      } catch (const std::invalid_argument& e) {
        fail(path + ".disorder", e.what());
      }
    }
    rc.requests.push_back(std::move(req));
  }
  return rc;
}

RunConfig load_run_config(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  return parse_run_config(doc, overrides);
}

Json to_json(const liouvillian::SystemConfig& c) {
  Json sys{{"mu1_debye", vec_json(c.geometry.mu1_debye)},
           {"mu2_debye", vec_json(c.geometry.mu2_debye)},
           {"r_nm", vec_json(c.geometry.r_nm)},
           {"omega_s_ev", c.geometry.omega_s_ev},
           {"optical_temperature_k", c.optical_temperature_k},
           {"pump_rate_per_ps", c.pump_rate_per_ps ? Json(*c.pump_rate_per_ps) : Json(nullptr)},
           {"pump_direction", c.pump_direction ? vec_json(*c.pump_direction) : Json(nullptr)},
           {"nonrad_rate_per_ps", c.nonrad_rate_per_ps},
           {"eea_rate_per_ps", c.eea_rate_per_ps},
           {"coupling_override_mev", c.coupling_override_mev ? Json(*c.coupling_override_mev) : Json(nullptr)},
           {"optical_dressing", c.optical_dressing == liouvillian::OpticalDressing::kQuartic ? "quartic" : "local"},
           {"allow_unequal_dipoles", c.allow_unequal_dipoles}};
  Json modes = Json::array();
  for (const auto& m : c.bath.hf_modes)
    modes.push_back({{"alpha_per_mev2", m.alpha}, {"omega_mev", m.omega_mev}, {"gamma_mev", m.gamma_mev}});
  Json bath{{"lambda0_mev", c.bath.lambda0_mev},
            {"omega_c_mev", c.bath.omega_c_mev},
            {"temperature_k", c.bath.temperature_k},
            {"hf_modes", modes}};
  Json flags{{"lamb_shifts", c.flags.lamb_shifts},
             {"secular", c.flags.secular},
             {"rotating_frame", c.flags.rotating_frame},
             {"include_phases", c.flags.include_phases}};
  return Json{{"system", sys}, {"bath", bath}, {"flags", flags}};
}

Json to_json(const RunConfig& rc) {
  Json out = to_json(rc.system);
  out["seed"] = rc.seed;
  out["threads"] = rc.threads;
  out["format"] = rc.format;
  Json reqs = Json::array();
  for (const auto& r : rc.requests) {
    Json j{{"kind", to_string(r.kind)}, {"name", r.name}, {grid_key(r.kind), r.grid}};
    switch (r.kind) {
      case RequestKind::kIntensity:
        j["q"] = direction_json(r.q);
        j["initial_state"] = r.initial_state;
        j["pump"] = r.pump;
        break;
      case RequestKind::kSpectrum:
        j["broadening_mev"] = r.broadening_mev;
        j["phonon_sideband"] = r.phonon_sideband;
        break;
      case RequestKind::kIrfSweep:
        j["delta_tau_ps"] = r.delta_tau_ps;
        [[fallthrough]];
      default:
        j["q"] = direction_json(r.q);
        j["q_prime"] = direction_json(r.q_prime);
        break;
    }
    if (r.disorder) j["disorder"] = disorder_json(*r.disorder);
    reqs.push_back(j);
  }
  out["requests"] = reqs;
  return out;
}

}  // namespace dimercorr::app
