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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cobound/pipelines.h"

namespace fs = std::filesystem;
using cobound::Json;

namespace {

const char* kSweep = R"({"pipeline": "sweep", "transform": {"kind": "rotation", "alpha": "√2-1"},
  "f": {"runs": [["3/2-√2", "1/2", "1"], ["2-√2", "1", "-1"]]},
  "transfer": {"runs": [["0", "1/2", "1"]]}, "N": 200, "r": "inf"})";
const char* kJoint = R"({"pipeline": "joint-approx", "machine": {"odometer": [2, 9]}, "M": 4, "N": 256,
  "K": {"minus": [0, 128], "plus": [128, 256]}})";
const char* kWeakMixing = R"({"pipeline": "weak-mixing", "source": {"polynomial": ["-1/2", "1", "0"]},
  "eps": ["1/4", "1/8", "1/16"], "N": [8, 16, 32], "stages": 3})";

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("cobound_cli_" + std::to_string(::getpid()) + "_" + std::to_string(count++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
  // Runs the binary with the arguments inside dir; returns the exit status.
  int run(const std::string& args, const std::string& env = "") const {
    const char* bin = std::getenv("COCYCLE_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "COCYCLE_BIN is not set");
    std::string cmd = "cd '" + dir.string() + "' && " + env + " '" + bin + "' " + args + " >out.txt 2>err.txt";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string err() const { return Slurp(dir / "err.txt"); }
  Json report(const std::string& rundir) const { return Json::parse(Slurp(dir / rundir / "report.json")); }
  static inline int count = 0;
};

}  // namespace

TEST_CASE("usage and config errors exit with 2") {
  Sandbox s;
  CHECK(s.run("") == 2);
  CHECK(s.run("frobnicate") == 2);
  CHECK(s.run("run") == 2);
  s.write("empty.json", "{}");
  CHECK(s.run("run empty.json") == 2);
  CHECK(s.err().find("empty config") != std::string::npos);
  s.write("garbage.json", "{not json");
  CHECK(s.run("run garbage.json") == 2);
  CHECK(s.run("run missing.json") == 2);
  s.write("unknown.json", R"({"pipeline": "nope"})");
  CHECK(s.run("run unknown.json") == 2);
  CHECK(s.err().find("unknown pipeline") != std::string::npos);
  s.write("partial.json", R"({"pipeline": "sweep", "N": 5})");
  CHECK(s.run("run partial.json") == 2);
  CHECK(s.err().find("transform") != std::string::npos);
  s.write("badnum.json", R"({"pipeline": "joint-approx", "machine": {"uniform": 8}, "M": 2, "N": 8,
    "K": {"minus": [0, 4], "plus": [4, 99]}})");
  CHECK(s.run("run badnum.json") == 2);
  s.write("sweep.json", kSweep);
  CHECK(s.run("run sweep.json --formats json,pdf") == 2);
  CHECK(s.err().find("unknown format") != std::string::npos);
  CHECK(s.run("run sweep.json", "COCYCLE_PRECISION=abc") == 2);
  CHECK(s.run("verify nowhere") == 2);
}

TEST_CASE("sweep run writes consistent json, csv and svg") {
  Sandbox s;
  s.write("sweep.json", kSweep);
  REQUIRE(s.run("run sweep.json -o out") == 0);
  Json r = s.report("out");
  CHECK(r["pipeline"] == "sweep");
  CHECK(r["ok"] == true);
  const Json& entries = r["sweep"]["entries"];
  CHECK(entries.size() == 200);
  // f = h - h o tau with h the indicator of [0, 1/2): every ||S_n f||_inf <= 2.
  CHECK(r["bound"] == "2");
  CHECK(r["inequalities"].size() == 200);
  for (const auto& q : r["inequalities"]) CHECK(q["holds"] == true);

  std::string csv = Slurp(s.dir / "out" / "sweep.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,norm,witness");
  size_t rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.rfind(std::to_string(rows + 1) + ",", 0) == 0);
    ++rows;
  }
  CHECK(rows == entries.size());

  std::string svg = Slurp(s.dir / "out" / "sweep.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("n (log scale)") != std::string::npos);
  CHECK(svg.find("||S_n f||_inf (log scale)") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);

  CHECK(s.run("verify out") == 0);
}

TEST_CASE("repeated runs and re-emission are byte-identical") {
  Sandbox s;
  s.write("sweep.json", kSweep);
  REQUIRE(s.run("run sweep.json -o a") == 0);
  REQUIRE(s.run("run sweep.json -o b") == 0);
  for (const char* f : {"report.json", "sweep.csv", "sweep.svg", "config.json"})
    CHECK(Slurp(s.dir / "a" / f) == Slurp(s.dir / "b" / f));

  std::string csv = Slurp(s.dir / "a" / "sweep.csv"), svg = Slurp(s.dir / "a" / "sweep.svg");
  fs::remove(s.dir / "a" / "sweep.csv");
  fs::remove(s.dir / "a" / "sweep.svg");
  REQUIRE(s.run("plot a") == 0);
  CHECK(Slurp(s.dir / "a" / "sweep.csv") == csv);
  CHECK(Slurp(s.dir / "a" / "sweep.svg") == svg);

  REQUIRE(s.run("run sweep.json -o c --formats json") == 0);
  CHECK(fs::exists(s.dir / "c" / "report.json"));
  CHECK(!fs::exists(s.dir / "c" / "sweep.csv"));
  CHECK(!fs::exists(s.dir / "c" / "sweep.svg"));
}

TEST_CASE("precision override is recorded") {
  Sandbox s;
  s.write("sweep.json", kSweep);
  REQUIRE(s.run("run sweep.json -o p", "COCYCLE_PRECISION=80") == 0);
  CHECK(s.report("p")["precision_digits"] == 80);
  REQUIRE(s.run("run sweep.json -o d") == 0);
  CHECK(s.report("d")["precision_digits"] == 50);
}

TEST_CASE("joint approximation is recomputed by verify") {
  Sandbox s;
  s.write("joint.json", kJoint);
  REQUIRE(s.run("run joint.json -o j") == 0);
  Json r = s.report("j");
  CHECK(r["joint"]["sigma_bound"] == "1/32");
  CHECK(r["joint"]["tau_bound"] == "1/4");
  CHECK(s.run("verify j") == 0);

  // Change the recorded tau error: the recomputation from the maps disagrees.
  std::string text = Slurp(s.dir / "j" / "report.json");
  Json bad = Json::parse(text);
  bad["joint"]["tau_error"] = "3/16";
  std::ofstream(s.dir / "j" / "report.json") << cobound::CanonicalDump(bad);
  CHECK(s.run("verify j") == 4);
  CHECK(s.err().find("tau error") != std::string::npos);

  // Change one branch of tau: the recorded errors no longer match.
  bad = Json::parse(text);
  bad["joint"]["tau"][0][2] = "1/1024";
  std::ofstream(s.dir / "j" / "report.json") << cobound::CanonicalDump(bad);
  CHECK(s.run("verify j") == 4);

  // Flip an inequality's left side.
  bad = Json::parse(text);
  bad["inequalities"][0]["lhs"] = "1";
  std::ofstream(s.dir / "j" / "report.json") << cobound::CanonicalDump(bad);
  CHECK(s.run("verify j") == 4);
}

TEST_CASE("failing certificates exit with 4") {
  Sandbox s;
  // The zero transfer gives the bound 0, which the sums exceed.
  Json cfg = Json::parse(kSweep);
  cfg["transfer"] = {{"runs", Json::array()}};
  cfg["N"] = 10;
  s.write("wrong.json", cfg.dump());
  CHECK(s.run("run wrong.json -o w") == 4);
  CHECK(s.err().find("FAILED") != std::string::npos);
  Json r = s.report("w");
  CHECK(r["ok"] == false);
  CHECK(s.run("verify w") == 4);
}

TEST_CASE("module errors surface verbatim with exit 3") {
  Sandbox s;
  s.write("series.json", R"({"pipeline": "non-coboundary", "mode": "series", "machine": {"uniform": 1024},
    "ratio": "1/4"})");
  CHECK(s.run("run series.json") == 3);
  CHECK(s.err().find("eps ratio 1/4 fails the tail constraint") != std::string::npos);
  s.write("escape.json", R"({"pipeline": "non-coboundary", "mode": "slow-escape", "machine": {"uniform": 256},
    "schedule": {"list": ["1/3"]}})");
  CHECK(s.run("run escape.json") == 3);
  CHECK(s.err().find("gamma") != std::string::npos);
  CHECK(!fs::exists(s.dir / "run-series"));
}

TEST_CASE("weak-mixing run writes the stage log") {
  Sandbox s;
  s.write("wm.json", kWeakMixing);
  REQUIRE(s.run("run wm.json") == 0);
  Json r = s.report("run-wm");
  CHECK(r["stage_log"].size() == 3);
  CHECK(r["residual"]["defined"] == "0");
  CHECK(!r["machine"]["tau"].empty());
  std::string log = Slurp(s.dir / "run-wm" / "stages.jsonl");
  CHECK(std::count(log.begin(), log.end(), '\n') == 3);
  CHECK(s.run("verify run-wm") == 0);
}

TEST_CASE("every pipeline runs and verifies") {
  Sandbox s;
  const std::vector<std::pair<std::string, std::string>> configs{
      {"rational", R"({"pipeline": "step-coboundary", "f": {"measures": ["1/3", "2/3"], "values": ["2/3", "-1/3"]}})"},
      {"torus", R"({"pipeline": "step-coboundary", "N": 2000,
          "f": {"measures": ["√2-1", "2-√2"], "values": ["2-√2", "1-√2"]}})"},
      {"mixed", R"({"pipeline": "step-coboundary", "N": 500, "starts": 8,
          "f": {"measures": ["√2-1", "(√2-1)/2", "(5-3√2)/2"], "values": ["1", "-2", "0"]}})"},
      {"growth", R"({"pipeline": "non-coboundary", "mode": "slow-growth", "machine": {"uniform": 5120},
          "rate": "sqrt", "n_lo": 16, "n_hi": 64})"},
      {"almost", R"({"pipeline": "non-coboundary", "mode": "almost-invariant", "machine": {"uniform": 64},
          "delta": "1/2", "n": 4, "eps": "1/4"})"},
      {"l1", R"({"pipeline": "non-coboundary", "mode": "l1-transfer", "machine": {"uniform": 32}, "N_max": 10})"},
      {"dio", R"({"pipeline": "diophantine", "alpha": "(√5-1)/2",
          "fourier": {"coefficients": [[2, "1", "0"], [-2, "1", "0"]]}})"}};
  for (const auto& [name, text] : configs) {
    CAPTURE(name);
    s.write(name + ".json", text);
    CHECK(s.run("run " + name + ".json") == 0);
    CHECK(s.run("verify run-" + name) == 0);
  }
  CHECK(s.report("run-rational")["case"] == "all-rational");
  CHECK(s.report("run-torus")["case"] == "rationally-independent");
  Json mixed = s.report("run-mixed");
  CHECK(mixed["case"] == "mixed");
  CHECK(mixed["extension"]["evidence"]["status"] == "evidence, not certificate");
  CHECK(s.report("run-dio")["obstruction"]["flag"] == "obstruction");
}
