// Copyright 2026 The PulseForge Authors. All Rights Reserved.
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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pulseforge/cli.hpp"
#include "pulseforge/fidelity_scan.hpp"
#include "pulseforge/grape.hpp"

namespace fs = std::filesystem;
using pulseforge::cli::run;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("pulseforge-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

bool contains(const std::string& s, const std::string& needle) {
  return s.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("info prints the target matrix and is stable") {
  const Result a = invoke({"info"});
  CHECK(a.code == 0);
  CHECK(contains(a.out, "0.707107"));
  CHECK(contains(a.out, "-1"));
  CHECK(contains(a.out, "2.88e+09"));
  CHECK(invoke({"info"}).out == a.out);
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"scan", "--no-such-flag"}).code == 2);
  CHECK(invoke({"scan", "--grid-points", "abc"}).code == 2);
  TempDir t;
  const Result bad = invoke({"scan", "--schemes", "sequential,xyz", "--out", t.path.string()});
  CHECK(bad.code == 2);
  CHECK(contains(bad.err, "xyz"));
  CHECK(invoke({"scan", "--error", "none", "--out", t.path.string()}).code == 2);
  CHECK(invoke({"scan", "--grid-min", "-2", "--out", t.path.string()}).code == 2);
  CHECK(invoke({"scan", "--composite-angles", "rounded", "--out", t.path.string()}).code == 2);
  CHECK(invoke({"grape", "--bins", "0", "--out", t.path.string()}).code == 2);
}

TEST_CASE("help exits 0") {
  const Result h = invoke({"--help"});
  CHECK(h.code == 0);
  CHECK(contains(h.out, "scan"));
}

TEST_CASE("scan writes csv and plot script and reports windows") {
  TempDir t;
  const Result r = invoke({"scan", "--error", "ple", "--schemes", "sequential,bb1", "--out",
                           t.path.string(), "--prefix", "run"});
  REQUIRE(r.code == 0);
  const fs::path csv = t.path / "run_scan.csv";
  REQUIRE(fs::exists(csv));
  CHECK(fs::exists(t.path / "run_scan.gp"));
  std::istringstream in(slurp(csv));
  const auto parsed = pulseforge::parse_scan_csv(in);
  CHECK(parsed.labels == std::vector<std::string>{"sequential", "bb1"});
  CHECK(parsed.grid.points.size() == 81);
  CHECK(contains(r.out, "sequential  [-0.425, 0.425]"));
  CHECK(contains(r.out, "bb1"));

  // Determinism of the written file.
  const std::string first = slurp(csv);
  REQUIRE(invoke({"scan", "--error", "ple", "--schemes", "sequential,bb1", "--out",
                  t.path.string(), "--prefix", "run"})
              .code == 0);
  CHECK(slurp(csv) == first);
}

TEST_CASE("off-resonance scan notes where CORPSE falls below sequential") {
  TempDir t;
  const Result r = invoke({"scan", "--error", "ore", "--schemes", "sequential,corpse", "--out",
                           t.path.string()});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "note: corpse is below sequential"));
}

TEST_CASE("single-point scan at zero error") {
  TempDir t;
  const Result r = invoke({"scan", "--grid-points", "1", "--grid-min", "0", "--grid-max", "0",
                           "--out", t.path.string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(t.path / "pulseforge_scan.csv") == "epsilon,sequential,bb1,corpse\n0,1,1,1\n");
}

TEST_CASE("unwritable output and unreadable pulse exit 3") {
  TempDir t;
  const fs::path blocker = t.path / "file";
  std::ofstream(blocker) << "x";
  CHECK(invoke({"scan", "--out", (blocker / "sub").string()}).code == 3);
  CHECK(invoke({"scan", "--schemes", "grape:" + (t.path / "missing.csv").string(), "--out",
                t.path.string()})
            .code == 3);
  std::ofstream(t.path / "junk.csv") << "not a pulse\n";
  CHECK(invoke({"compare", "--grape-pulse", (t.path / "junk.csv").string(), "--out",
                t.path.string()})
            .code == 3);
  CHECK(invoke({"info", "--config", (t.path / "nope.cfg").string()}).code == 3);
}

TEST_CASE("infeasible grape run exits 4") {
  TempDir t;
  const Result r = invoke({"grape", "--bins", "1", "--time", "0.01", "--error", "none",
                           "--restarts", "1", "--out", t.path.string()});
  CHECK(r.code == 4);
  CHECK(contains(r.err, "trained-range minimum fidelity"));
}

TEST_CASE("short grape run writes checkpoint and trace deterministically") {
  TempDir t;
  const std::vector<std::string> args{"grape", "--error", "ore", "--bins", "40",
                                      "--max-iterations", "20", "--restarts", "1",
                                      "--seed", "3", "--out", t.path.string()};
  const Result r = invoke(args);
  CHECK((r.code == 0 || r.code == 4));
  const fs::path pulse = t.path / "pulseforge_pulse.csv";
  REQUIRE(fs::exists(pulse));
  const std::string trace = slurp(t.path / "pulseforge_trace.csv");
  CHECK(trace.rfind("iteration,objective\n0,", 0) == 0);
  const std::string first = slurp(pulse);
  CHECK(contains(first, "# seed=3\n"));
  CHECK(contains(first, "# error=ore\n"));
  CHECK(invoke(args).code == r.code);
  CHECK(slurp(pulse) == first);

  std::istringstream in(first);
  CHECK(pulseforge::grape::read_pulse_csv(in).schedule.bins() == 40);
}

TEST_CASE("time flag accepts multiples of pi") {
  TempDir t;
  REQUIRE(invoke({"grape", "--error", "none", "--bins", "2", "--time", "0.5pi",
                  "--max-iterations", "1", "--restarts", "1", "--out", t.path.string()})
              .code != 2);
  CHECK(contains(slurp(t.path / "pulseforge_pulse.csv"), "# total_time=1.5707963267948966\n"));
  CHECK(invoke({"grape", "--time", "xpi", "--out", t.path.string()}).code == 2);
}

TEST_CASE("config file supplies defaults that flags override") {
  TempDir t;
  const fs::path cfg = t.path / "run.cfg";
  std::ofstream(cfg) << "# scan settings\nerror = ore\ngrid-points=5\nprefix=fromcfg\n";
  REQUIRE(invoke({"scan", "--config", cfg.string(), "--grid-points", "3", "--out",
                  t.path.string()})
              .code == 0);
  const std::string text = slurp(t.path / "fromcfg_scan.csv");
  CHECK(text == slurp(t.path / "fromcfg_scan.csv"));
  std::istringstream in(text);
  CHECK(pulseforge::parse_scan_csv(in).grid.points.size() == 3);

  std::ofstream(t.path / "bad.cfg") << "grid-points\n";
  CHECK(invoke({"scan", "--config", (t.path / "bad.cfg").string()}).code == 2);
}

TEST_CASE("output directory defaults to PULSEFORGE_OUT") {
  TempDir t;
  ::setenv("PULSEFORGE_OUT", t.path.string().c_str(), 1);
  const Result r = invoke({"scan", "--grid-points", "3"});
  ::unsetenv("PULSEFORGE_OUT");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(t.path / "pulseforge_scan.csv"));
}

TEST_CASE("compare prints the duration table and writes a combined csv") {
  TempDir t;
  const Result r = invoke({"compare", "--error", "ore", "--out", t.path.string()});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "1.50"));
  CHECK(contains(r.out, "9.50"));
  CHECK(contains(r.out, "8.37"));
  CHECK(contains(r.out, "5.58"));
  CHECK(contains(r.out, "GRAPE column omitted"));
  std::istringstream in(slurp(t.path / "pulseforge_compare.csv"));
  const auto parsed = pulseforge::parse_scan_csv(in);
  CHECK(parsed.grid.points.size() == 41);
  CHECK(parsed.labels.size() == 3);
}

TEST_CASE("compare includes a GRAPE pulse file") {
  TempDir t;
  REQUIRE(invoke({"grape", "--error", "none", "--bins", "8", "--max-iterations", "2",
                  "--restarts", "1", "--prefix", "g", "--out", t.path.string()})
              .code != 2);
  const Result r = invoke({"compare", "--error", "ple", "--grape-pulse",
                           (t.path / "g_pulse.csv").string(), "--out", t.path.string()});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "grape"));
  CHECK(contains(r.out, "6.00"));
  std::istringstream in(slurp(t.path / "pulseforge_compare.csv"));
  CHECK(pulseforge::parse_scan_csv(in).labels.size() == 4);
}

}  // TEST_SUITE
