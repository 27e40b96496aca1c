// Copyright 2026 The cobound Authors.
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

// cocycle: run experiment configs, verify and plot their reports.
//
// Exit codes: 0 success, 2 config or usage error, 3 construction failure,
// 4 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cobound/pipelines.h"
#include "cobound/real.h"

namespace fs = std::filesystem;
using cobound::ConfigError;
using cobound::Json;

namespace {

constexpr int kOk = 0, kConfig = 2, kConstruction = 3, kVerification = 4;

Json ReadJson(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(p.string() + ": " + e.what());
  }
}

void CheckPrecisionEnv() {
  const char* env = std::getenv("COCYCLE_PRECISION");
  if (env == nullptr) return;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*env == '\0' || *end != '\0' || v < 20 || v > 10000)
    throw ConfigError(std::string("COCYCLE_PRECISION must be an integer in [20, 10000], got '") + env + "'");
}

int Run(const std::string& config_path, std::string out_dir, const std::string& formats) {
  auto fmts = cobound::ParseFormats(formats);
  Json config = ReadJson(config_path);
  if (out_dir.empty()) out_dir = "run-" + fs::path(config_path).stem().string();
  Json report;
  try {
    report = cobound::RunExperiment(config);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConstruction;
  }
  fs::create_directories(out_dir);
  std::ofstream(fs::path(out_dir) / "config.json", std::ios::binary) << cobound::CanonicalDump(config);
  for (const auto& name : cobound::EmitOutputs(report, out_dir, fmts)) std::cout << "wrote " << out_dir << "/" << name << "\n";

  size_t failed = 0;
  for (const auto& q : report.at("inequalities")) {
    if (q.at("holds").get<bool>()) continue;
    ++failed;
    std::cerr << "FAILED " << q.at("name").get<std::string>() << ": " << q.at("lhs").get<std::string>() << " "
              << q.at("rel").get<std::string>() << " " << q.at("rhs").get<std::string>() << "\n";
  }
  std::cout << report.at("pipeline").get<std::string>() << ": " << report.at("inequalities").size()
            << " inequalities, " << failed << " failed\n";
  return failed ? kVerification : kOk;
}

int Verify(const std::string& dir) {
  Json report = ReadJson(fs::path(dir) / "report.json");
  cobound::VerifyResult r = cobound::VerifyReport(report);
  for (const auto& f : r.failures) std::cerr << "FAILED " << f << "\n";
  std::cout << "verify " << dir << ": " << r.checked << " checks, " << r.failures.size() << " failures\n";
  return r.ok() ? kOk : kVerification;
}

int Plot(const std::string& dir, const std::string& formats) {
  Json report = ReadJson(fs::path(dir) / "report.json");
  if (!cobound::HasSweep(report)) throw ConfigError("report in " + dir + " has no sweep to plot");
  for (const auto& name : cobound::EmitOutputs(report, dir, cobound::ParseFormats(formats)))
    std::cout << "wrote " << dir << "/" << name << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coboundary experiments: exact certificates for cocycle sums"};
  app.require_subcommand(1);

  std::string config_path, out_dir, run_formats = "json,csv,svg";
  auto* run = app.add_subcommand("run", "Run the pipeline named in a config and write a run directory");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("-o,--out", out_dir, "Run directory (default run-<config stem>)");
  run->add_option("--formats", run_formats, "Comma-separated subset of json,csv,svg");

  std::string verify_dir;
  auto* verify = app.add_subcommand("verify", "Recompute every certificate in a run directory");
  verify->add_option("rundir", verify_dir, "Run directory")->required();

  std::string plot_dir, plot_formats = "csv,svg";
  auto* plot = app.add_subcommand("plot", "Re-derive CSV and SVG from a run's report.json");
  plot->add_option("rundir", plot_dir, "Run directory")->required();
  plot->add_option("--formats", plot_formats, "Comma-separated subset of json,csv,svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    CheckPrecisionEnv();
    if (run->parsed()) return Run(config_path, out_dir, run_formats);
    if (verify->parsed()) return Verify(verify_dir);
    return Plot(plot_dir, plot_formats);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConstruction;
  }
}
