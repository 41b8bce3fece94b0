#include <chrono>
#include <cstdlib>
#include <iostream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "mml/config.hpp"
#include "mml/io.hpp"
#include "mml/presets.hpp"
#include "mml/selftest.hpp"

namespace {

enum Exit { ok = 0, failure = 1, parse = 2, validation = 3, guard = 4, no_crossing = 5 };

int report(const char* kind, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  std::cerr << j.dump() << "\n";
  return code;
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("MML_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring invalid MML_THREADS='" << env << "'\n";
  }
  return omp_get_max_threads();
}

void print_metrics(const mml::Dataset& ds) {
  std::cout << "scenario " << ds.scenario << " (" << ds.backend << ")\n";
  for (const auto& [k, v] : ds.metrics) std::cout << "  " << k << " = " << mml::format_double(v) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majorana zero-mode memory simulations"};
  app.set_version_flag("--version", std::string(MML_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir = ".";
  int threads = 0;
  bool long_run = false;
  app.add_option("--out-dir", out_dir, "Directory for CSV datasets and the manifest");
  app.add_option("--threads", threads, "Worker threads (default: MML_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--long-run", long_run, "Allow the larger chain lengths (thermal L up to 11, Arrhenius L=8)");

  auto* run = app.add_subcommand("run", "Run a scenario from a config file or a bundled preset");
  std::string config_path, preset_name;
  auto* cfg_opt = run->add_option("config", config_path, "YAML config file");
  auto* preset_opt = run->add_option("--preset", preset_name, "Bundled preset name (see `presets`)");
  cfg_opt->excludes(preset_opt);
  preset_opt->excludes(cfg_opt);

  auto* selftest = app.add_subcommand("selftest", "Run the small-system oracle checks");

  auto* presets_cmd = app.add_subcommand("presets", "List the bundled figure presets");
  std::string dump;
  presets_cmd->add_option("--dump", dump, "Print the YAML config of one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : Exit::parse;
  }

  const int n_threads = resolve_threads(threads);
  omp_set_num_threads(n_threads);

  if (*presets_cmd) {
    try {
      if (!dump.empty()) {
        std::cout << mml::config_to_yaml(mml::find_preset(dump).config);
      } else {
        std::cout << mml::presets_listing();
      }
    } catch (const mml::ValidationError& e) {
      return report("validation", e.what(), Exit::validation);
    }
    return Exit::ok;
  }

  if (*selftest) {
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const auto checks = mml::run_selftest();
      std::cout << mml::format_selftest(checks);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      bool all = true;
      for (const auto& c : checks) all = all && c.pass;
      std::cout << (all ? "selftest passed" : "selftest FAILED") << " in " << secs << " s\n";
      return all ? Exit::ok : Exit::failure;
    } catch (const std::exception& e) {
      return report("internal", e.what(), Exit::failure);
    }
  }

  // run
  try {
    mml::ExperimentConfig cfg;
    if (!preset_name.empty()) {
      cfg = mml::find_preset(preset_name).config;
    } else if (!config_path.empty()) {
      cfg = mml::load_config(config_path);
    } else {
      return report("parse", "run needs a config file or --preset", Exit::parse);
    }
    if (long_run) cfg.long_run = true;
    cfg.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const mml::Dataset ds = mml::run_experiment(cfg);
    mml::RunInfo info;
    info.version = MML_VERSION;
    info.threads = n_threads;
    info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto manifest = mml::write_outputs(ds, cfg, info, out_dir);
    print_metrics(ds);
    std::cout << "manifest: " << manifest.string() << "\n";
    return Exit::ok;
  } catch (const mml::ConfigParseError& e) {
    return report("parse", e.what(), Exit::parse);
  } catch (const mml::DenseLimitError& e) {
    return report("backend-guard", e.what(), Exit::guard);
  } catch (const mml::ValidationError& e) {
    return report("validation", e.what(), Exit::validation);
  } catch (const mml::NoCrossingError& e) {
    return report("no-crossing", e.what(), Exit::no_crossing);
  } catch (const std::exception& e) {
    return report("internal", e.what(), Exit::failure);
  }
}
