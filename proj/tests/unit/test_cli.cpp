// Copyright 2026 The cpm Authors
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

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cpm/error.hpp"

namespace fs = std::filesystem;
using namespace cpm;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cpm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code =
      cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Scratch output directory wired through the environment override.
class OutDir {
 public:
  OutDir() {
    dir_ = fs::temp_directory_path() /
           ("cpm-cli-test-" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::setenv(cli::kOutputDirEnv, dir_.c_str(), 1);
  }
  ~OutDir() {
    ::unsetenv(cli::kOutputDirEnv);
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  fs::path operator/(const std::string& name) const { return dir_ / name; }
  bool has_tmp() const {
    for (const auto& e : fs::directory_iterator(dir_)) {
      if (e.path().extension() == ".tmp") return true;
    }
    return false;
  }

 private:
  fs::path dir_;
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults lists the registry") {
  const auto r = run_cli({"defaults"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("lambda0_nm=500") != std::string::npos);
  CHECK(r.out.find("eta=") != std::string::npos);
  CHECK(r.out.find("upsilon=") != std::string::npos);
}

TEST_CASE("coefficient table round-trips through its metadata") {
  OutDir dir;
  auto r = run_cli({"qjs-table", "--qjs-n-max", "6", "--out", "a.csv"});
  REQUIRE(r.code == cli::kExitOk);
  const auto csv = slurp(dir / "a.csv");
  const auto rows = lines_of(csv);
  REQUIRE(!rows.empty());
  CHECK(rows[0] == "n,jb,jb_norm,jd,jd_norm,je");
  CHECK(csv.back() == '\n');
  const auto meta = slurp(dir / "a.meta");
  CHECK(meta.find("result.beta") != std::string::npos);
  CHECK(meta.find("qjs_n_max") != std::string::npos);

  r = run_cli({"qjs-table", "--config", (dir / "a.meta").string(), "--out",
               "b.csv"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(slurp(dir / "b.csv") == csv);
  CHECK(!dir.has_tmp());
}

TEST_CASE("counts and waiting-time tables") {
  OutDir dir;
  auto r = run_cli({"counts", "--nbar", "20", "--rt-points", "5",
                    "--rt-max", "10", "--out", "c.csv"});
  REQUIRE(r.code == cli::kExitOk);
  const auto rows = lines_of(slurp(dir / "c.csv"));
  CHECK(rows[0] == "rt,mbar_sd,mbar_e,k_sd,k_e");
  CHECK(rows.size() == 6);
  r = run_cli({"counts", "--config", (dir / "c.meta").string(), "--out",
               "c2.csv"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(slurp(dir / "c2.csv") == slurp(dir / "c.csv"));

  r = run_cli({"wt", "--state=number", "--nbar=20", "--rt-points=3",
               "--rt-max=4", "--model", "sd", "--out", "w.csv"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(lines_of(slurp(dir / "w.csv"))[0] == "rt,ncav,mean_wt");
  const auto meta = slurp(dir / "w.meta");
  CHECK(meta.find("result.theta=16.666666666666668") != std::string::npos);
  CHECK(!dir.has_tmp());
}

TEST_CASE("exit codes") {
  OutDir dir;
  CHECK(run_cli({"counts", "--eta", "1.5"}).code == cli::kExitValidation);
  CHECK(run_cli({"counts", "--no-such-key", "1"}).code ==
        cli::kExitValidation);
  CHECK(run_cli({"qjs-table", "--qjs-n-max", "0"}).code ==
        cli::kExitValidation);
  CHECK(run_cli({"snr-scan", "--b-points", "1"}).code == cli::kExitNumerical);
  CHECK(run_cli({}).code == cli::kExitValidation);
  CHECK(run_cli({"counts", "--config", (dir / "missing.cfg").string()}).code ==
        cli::kExitValidation);
  const auto bad = run_cli({"counts", "--d", "-1"});
  CHECK(bad.code == cli::kExitValidation);
  CHECK(!bad.err.empty());
}

TEST_CASE("config rejects unknown keys and bad values") {
  cli::RunConfig c;
  CHECK_THROWS_AS(c.set("bogus", "1"), InvalidArgument);
  c.set("eta", "abc");
  CHECK_THROWS_AS(c.get_double("eta"), InvalidArgument);
  cli::RunConfig ok;
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.theta() == doctest::Approx(10.0 / 0.6));
}

TEST_CASE("number formatting is locale independent and exact") {
  CHECK(cli::format_double(0.1) == "0.10000000000000001");
  CHECK(cli::format_double(-2.5) == "-2.5");
  CHECK(std::stod(cli::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("verify passes and the seed moves only Monte Carlo lines") {
  const auto a = run_cli({"verify", "--seed", "1"});
  const auto b = run_cli({"verify", "--seed", "2"});
  CHECK(a.code == cli::kExitOk);
  CHECK(b.code == cli::kExitOk);
  const auto la = lines_of(a.out);
  const auto lb = lines_of(b.out);
  REQUIRE(la.size() == lb.size());
  int mc_diff = 0;
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (la[i].find("mc-") != std::string::npos) {
      mc_diff += la[i] != lb[i];
    } else {
      CHECK(la[i] == lb[i]);
    }
  }
  CHECK(mc_diff > 0);
  CHECK(run_cli({"verify", "--eta", "2"}).code == cli::kExitValidation);
}

}  // TEST_SUITE
