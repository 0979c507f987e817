#include "pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dimercorr/dynamics.hpp"
#include "dimercorr/hilbert.hpp"
#include "dimercorr/observables.hpp"
#include "dimercorr/units.hpp"

namespace dimercorr::app {

namespace {

using geometry::DetectionMode;

Operator initial_state(const std::string& name, const liouvillian::Liouvillian& liou) {
  Ket psi = Ket::Zero();
  const double s = 1.0 / std::sqrt(2.0);
  if (name == "steady") return dynamics::steady_state(liou.matrix).rho;
  if (name == "ee") psi(3) = 1.0;
  else if (name == "eg") psi(1) = 1.0;
  else if (name == "ge") psi(2) = 1.0;
  else if (name == "symmetric") psi(1) = psi(2) = s;
  else if (name == "antisymmetric") psi(1) = s, psi(2) = -s;
  return psi * psi.adjoint();
}

Table intensity(const RunConfig& rc, const Request& req) {
  auto sys = rc.system;
  if (!req.pump) sys.pump_rate_per_ps = 0.0;
  const auto liou = liouvillian::assemble(sys);
  const dynamics::Propagator prop(liou.matrix);
  const auto traj = dynamics::propagate(prop, initial_state(req.initial_state, liou), req.grid);
  const auto mode = DetectionMode::from_direction(resolve_direction(req.q, sys.geometry));
  Table t;
  t.columns = {"t_ps", "total_intensity_gamma1", "directional_intensity_gamma1_per_sr"};
  t.data = {req.grid, observables::total_intensity(traj, sys.geometry),
            observables::directional_intensity(traj, sys.geometry, mode)};
  return t;
}

observables::G2Curve single_curve(const liouvillian::SystemConfig& sys, const Request& req) {
  const auto liou = liouvillian::assemble(sys);
  const auto ss = dynamics::steady_state(liou.matrix);
  const dynamics::Propagator prop(liou.matrix);
  const auto q = DetectionMode::from_direction(resolve_direction(req.q, sys.geometry));
  const auto qp = DetectionMode::from_direction(resolve_direction(req.q_prime, sys.geometry));
  return observables::g2_curve(prop, ss.rho, sys.geometry, q, qp, req.grid, sys.flags.include_phases);
}

Table g2(const RunConfig& rc, const Request& req) {
  const auto curve = single_curve(rc.system, req);
  Table t;
  t.columns = {"tau_ps", "g2", "coincidences_debye4"};
  t.data = {req.grid, curve.g2, curve.coincidences};
  t.extra = {{"singles_q_debye2", curve.singles_q}, {"singles_q_prime_debye2", curve.singles_q_prime}};
  return t;
}

Table spectrum(const RunConfig& rc, const Request& req) {
  auto sys = rc.system;
  sys.pump_rate_per_ps = 0.0;
  const vibrational::PhononFunctions phonon(sys.bath);
  const auto liou = liouvillian::assemble(sys, phonon);
  const auto ss = dynamics::steady_state(liou.matrix);
  observables::SpectrumOptions opt;
  opt.broadening_mev = req.broadening_mev;
  opt.phonon_sideband = req.phonon_sideband;
  const auto spec = observables::absorption_spectrum(liou, ss.rho, sys, phonon, req.grid, opt);
  Table t;
  t.columns = {"omega_rel_mev", "absorption"};
  t.data = {spec.omega_rel_mev, spec.values};
  Json peaks = Json::array();
  for (const auto& p : spec.peaks)
    peaks.push_back({{"position_mev", p.position_mev}, {"height", p.height}, {"fwhm_mev", p.fwhm_mev}});
  t.extra = {{"peaks", peaks},
             {"expected_peaks_mev",
              {-liou.meta.lambda_total_mev - std::abs(liou.meta.coupling_prime_mev) / 2.0,
               -liou.meta.lambda_total_mev + std::abs(liou.meta.coupling_prime_mev) / 2.0}}};
  return t;
}

Table temperature_sweep(const RunConfig& rc, const Request& req) {
  Table t;
  t.columns = {"temperature_k", "g2_zero_delay", "kappa0", "coupling_prime_mev"};
  t.data.assign(4, {});
  for (double temp : req.grid) {
    auto sys = rc.system;
    sys.bath.temperature_k = temp;
    const auto liou = liouvillian::assemble(sys);
    const auto ss = dynamics::steady_state(liou.matrix);
    const auto q = DetectionMode::from_direction(resolve_direction(req.q, sys.geometry));
    const auto qp = DetectionMode::from_direction(resolve_direction(req.q_prime, sys.geometry));
    t.data[0].push_back(temp);
    t.data[1].push_back(observables::g2_zero_delay(ss.rho, sys.geometry, q, qp, sys.flags.include_phases));
    t.data[2].push_back(liou.meta.kappa0);
    t.data[3].push_back(liou.meta.coupling_prime_mev);
  }
  return t;
}

Json ensemble_extra(const ensemble::EnsembleResult& r) {
  Json failures = Json::array();
  for (std::size_t i = 0; i < r.failures.size() && i < 20; ++i) failures.push_back(r.failures[i]);
  return {{"accepted", r.accepted}, {"failed", r.failed}, {"failures", failures}};
}

Table ensemble_table(const RunConfig& rc, const Request& req) {
  const auto r = ensemble::ensemble_g2(rc.system, *req.disorder, req.grid);
  Table t;
  t.columns = {"tau_ps", "g2_mean", "g2_std_error"};
  t.data = {req.grid, r.mean, r.std_error};
  t.extra = ensemble_extra(r);
  return t;
}

std::string width_label(double w) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", w);
  std::string s = buf;
  for (auto& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

Table irf_sweep(const RunConfig& rc, const Request& req) {
  Table t;
  std::vector<double> base;
  if (req.disorder) {
    const auto r = ensemble::ensemble_g2(rc.system, *req.disorder, req.grid);
    base = r.mean;
    t.extra = ensemble_extra(r);
  } else {
    base = single_curve(rc.system, req).g2;
  }
  t.columns = {"tau_ps", "g2"};
  t.data = {req.grid, base};
  for (double w : req.delta_tau_ps) {
    t.columns.push_back("g2_irf_fwhm_" + width_label(w) + "ps");
    t.data.push_back(observables::convolve_instrument_response(req.grid, base, w));
  }
  return t;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Json derived_parameters(const liouvillian::SystemConfig& system) {
  const auto meta = liouvillian::assemble(system).meta;
  return {{"omega_prime_mev", meta.omega_prime_mev},
          {"coupling_bare_mev", meta.coupling_bare_mev},
          {"coupling_prime_mev", meta.coupling_prime_mev},
          {"kappa0", meta.kappa0},
          {"kappa_hf", meta.kappa_h},
          {"reorganization_total_mev", meta.lambda_total_mev},
          {"single_emitter_rate_per_ps", meta.gamma_opt_per_ps},
          {"local_decay_rate_per_ps", meta.local_decay_per_ps},
          {"optical_occupation", meta.optical_occupation},
          {"pump_rate_per_ps", meta.pump_rate_per_ps},
          {"optical_dressing", meta.optical_dressing}};
}

RunResult execute(const RunConfig& rc) {
  RunResult out;
  out.derived = derived_parameters(rc.system);
  for (const auto& req : rc.requests) {
    Table t;
    switch (req.kind) {
      case RequestKind::kIntensity: t = intensity(rc, req); break;
      case RequestKind::kG2: t = g2(rc, req); break;
      case RequestKind::kSpectrum: t = spectrum(rc, req); break;
      case RequestKind::kTemperatureSweep: t = temperature_sweep(rc, req); break;
      case RequestKind::kEnsemble: t = ensemble_table(rc, req); break;
      case RequestKind::kIrfSweep: t = irf_sweep(rc, req); break;
    }
    t.name = req.name;
    for (const auto& col : t.data)
      for (double v : col)
        if (!std::isfinite(v)) throw std::runtime_error(req.name + ": non-finite value in output");
    out.tables.push_back(std::move(t));
  }
  return out;
}

void write_csv(const Table& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  for (std::size_t c = 0; c < table.columns.size(); ++c) f << (c ? "," : "") << table.columns[c];
  f << '\n';
  const std::size_t rows = table.data.empty() ? 0 : table.data.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.data.size(); ++c) f << (c ? "," : "") << format_double(table.data[c][r]);
    f << '\n';
  }
  if (!f.flush()) throw std::runtime_error("write failed: " + path);
}

void write_json_table(const Table& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  Json data = Json::object();
  for (std::size_t c = 0; c < table.columns.size(); ++c) data[table.columns[c]] = table.data[c];
  f << Json{{"columns", table.columns}, {"data", data}}.dump(1) << '\n';
  if (!f.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace dimercorr::app
