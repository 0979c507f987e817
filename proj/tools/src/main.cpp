#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dimercorr/geometry.hpp"
#include "dimercorr/presets.hpp"
#include "dimercorr/units.hpp"
#include "dimercorr/version.hpp"
#include "pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dimercorr;

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

int list_presets() {
  for (const auto& p : presets::all()) {
    const auto& g = p.config.geometry;
    const auto d = app::derived_parameters(p.config);
    const double angle = std::acos(std::clamp(geometry::dipole_cross_factor(g), -1.0, 1.0)) * 180.0 / units::kPi;
    std::printf("%-12s %s\n", p.name.c_str(), p.description.c_str());
    std::printf("    mu1_debye = (%g, %g, %g)  mu2_debye = (%g, %g, %g)  r_nm = (%g, %g, %g)\n", g.mu1_debye[0],
                g.mu1_debye[1], g.mu1_debye[2], g.mu2_debye[0], g.mu2_debye[1], g.mu2_debye[2], g.r_nm[0], g.r_nm[1],
                g.r_nm[2]);
    std::printf("    relative orientation = %.2f deg  J = %+.4f meV  J' = %+.4f meV  kappa0 = %.5f\n", angle,
                d["coupling_bare_mev"].get<double>(), d["coupling_prime_mev"].get<double>(),
                d["kappa0"].get<double>());
  }
  return kOk;
}

int write_bundle(const app::RunConfig& rc, const app::RunResult& result, const fs::path& out_dir, double wall_s) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << out_dir << ": " << ec.message() << "\n";
    return kIo;
  }
  try {
    app::Json outputs = app::Json::array();
    for (const auto& t : result.tables) {
      const std::string file = t.name + (rc.format == "json" ? ".json" : ".csv");
      if (rc.format == "json") app::write_json_table(t, (out_dir / file).string());
      else app::write_csv(t, (out_dir / file).string());
      app::Json entry{{"file", file}, {"columns", t.columns}, {"rows", t.data.front().size()}};
      if (!t.extra.empty()) entry["details"] = t.extra;
      outputs.push_back(entry);
    }
    app::Json sidecar{{"version", dimercorr::kVersion},
                      {"seed", rc.seed},
                      {"wall_time_s", wall_s},
                      {"derived", result.derived},
                      {"outputs", outputs},
                      {"config", app::to_json(rc)}};
    std::ofstream f(out_dir / "bundle.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot open bundle.json for writing");
    f << sidecar.dump(2) << '\n';
    if (!f.flush()) throw std::runtime_error("write failed: bundle.json");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Photon correlations of vibronically dressed molecular dimers"};
  cli.set_version_flag("--version", std::string(dimercorr::kVersion));
  cli.require_subcommand(1);

  std::string config_path, out_dir = "out", preset, format;
  std::uint64_t seed = 0;
  int threads = 0;

  auto* run = cli.add_subcommand("run", "Run every request in a config and write a CSV/JSON bundle");
  run->add_option("--config", config_path, "JSON config (a previous bundle.json also works)")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "Master seed for ensembles");
  auto* threads_opt = run->add_option("--threads", threads, "Worker threads (fallback: DIMERCORR_THREADS)");
  auto* preset_opt = run->add_option("--preset", preset, "Preset replacing the config's base system");
  auto* format_opt = run->add_option("--format", format, "Curve format")->check(CLI::IsMember({"csv", "json"}));

  auto* validate = cli.add_subcommand("validate", "Parse and validate a config without running it");
  validate->add_option("--config", config_path, "JSON config")->required();
  auto* vpreset_opt = validate->add_option("--preset", preset, "Preset replacing the config's base system");

  cli.add_subcommand("list-presets", "Print the named dimer presets");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? kOk : kUsage;
  }

  if (cli.got_subcommand("list-presets")) return list_presets();

  app::Overrides ov;
  if (*preset_opt || *vpreset_opt) ov.preset = preset;
  if (*seed_opt) ov.seed = seed;
  if (*format_opt) ov.format = format;
  if (*threads_opt) {
    ov.threads = threads;
  } else if (const char* env = std::getenv("DIMERCORR_THREADS")) {
    try {
      ov.threads = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "error: DIMERCORR_THREADS must be an integer\n";
      return kConfig;
    }
  }

  app::RunConfig rc;
  try {
    rc = app::load_run_config(config_path, ov);
  } catch (const app::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }

  if (cli.got_subcommand("validate")) {
    std::cout << "ok: " << rc.requests.size() << " request(s)\n";
    return kOk;
  }

  const auto start = std::chrono::steady_clock::now();
  app::RunResult result;
  try {
    result = app::execute(rc);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int code = write_bundle(rc, result, out_dir, wall);
  if (code == kOk) std::cout << "wrote " << result.tables.size() << " curve(s) to " << out_dir << "\n";
  return code;
}
