// Copyright 2026 The mpxcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run scenarios, list them, validate configs.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mpx/errors.hpp"
#include "mpx/parallel.hpp"
#include "mpx/scenarios.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kSolver = 3, kInternal = 4 };

int fail(int code, const char* kind, const std::string& msg) {
  std::cerr << fmt::format("error[{}]: {}\n", kind, msg);
  return code;
}

std::filesystem::path output_dir(const mpx::ScenarioConfig& cfg, const std::string& out) {
  if (!out.empty()) return out;
  const char* root = std::getenv("MPX_OUTPUT_ROOT");
  std::filesystem::path base = root && *root ? root : "runs";
  std::filesystem::path leaf = cfg.output.empty() ? cfg.scenario : cfg.output;
  return leaf.is_absolute() ? leaf : base / leaf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lindblad simulator for frequency-multiplexed photon counting"};
  app.require_subcommand(1);

  std::string scenario, config_path, out;
  std::vector<std::string> overrides;
  int workers = mpx::default_workers();
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run a scenario and write its result directory");
  run->add_option("scenario", scenario, "Scenario name")->required();
  run->add_option("--config", config_path, "YAML config")->required();
  run->add_option("--out", out, "Output directory (default: $MPX_OUTPUT_ROOT/<output or scenario>)");
  run->add_option("--workers", workers, "Parallel workers")->check(CLI::PositiveNumber);
  run->add_option("--override", overrides, "Dotted key=value applied over the config");
  run->add_flag("-q,--quiet", quiet, "No progress messages");

  auto* list = app.add_subcommand("list-scenarios", "List scenario names");

  std::string validate_path;
  bool print = false;
  auto* validate = app.add_subcommand("validate", "Parse and validate a config");
  validate->add_option("--config", validate_path, "YAML config")->required();
  validate->add_option("--override", overrides, "Dotted key=value applied over the config");
  validate->add_flag("--print", print, "Print the fully resolved config");

  std::string defaults_name;
  auto* defaults = app.add_subcommand("defaults", "Print the default config of a scenario");
  defaults->add_option("scenario", defaults_name, "Scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*list) {
      for (const auto& s : mpx::list_scenarios()) std::cout << fmt::format("{:<26} {}\n", s.name, s.description);
      return kOk;
    }
    if (*defaults) {
      std::cout << mpx::serialize_config(mpx::default_config(defaults_name));
      return kOk;
    }
    if (*validate) {
      mpx::ScenarioConfig cfg = mpx::load_config(validate_path, overrides);
      mpx::validate_config(cfg);
      if (print) std::cout << mpx::serialize_config(cfg);
      else std::cout << fmt::format("ok: {}\n", cfg.scenario);
      return kOk;
    }
    mpx::ScenarioConfig cfg = mpx::load_config(config_path, overrides);
    if (cfg.scenario != scenario)
      throw mpx::ConfigError(fmt::format("config is for '{}', not '{}'", cfg.scenario, scenario));
    mpx::RunOptions opt;
    opt.workers = workers;
    if (!quiet) opt.log = [](const std::string& m) { std::cerr << m << '\n'; };
    mpx::ScenarioResult r = mpx::run_scenario(cfg, opt);
    std::filesystem::path dir = output_dir(cfg, out);
    mpx::write_result(r, dir);
    if (!quiet) std::cerr << fmt::format("wrote {} ({:.1f} s, {} runs)\n", dir.string(), r.wall_time, r.runs);
    return kOk;
  } catch (const mpx::ConfigError& e) {
    return fail(kConfig, "config", e.what());
  } catch (const mpx::DimensionError& e) {
    return fail(kConfig, "config", e.what());
  } catch (const mpx::TruncationError& e) {
    return fail(kConfig, "config", e.what());
  } catch (const mpx::IntegrationError& e) {
    return fail(kSolver, "solver", e.what());
  } catch (const mpx::FitError& e) {
    return fail(kSolver, "fit", e.what());
  } catch (const mpx::ReconstructionError& e) {
    return fail(kSolver, "reconstruction", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
}
