// SPDX-License-Identifier: Apache-2.0
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "parint/bench.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "parint_test_cli";

int run(const std::string& args) {
  fs::create_directories(kDir);
  const std::string cmd = std::string(PARINT_CLI_PATH) + " " + args + " >" + (kDir / "stdout").string() + " 2>" +
                          (kDir / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("sweep writes csv and exits 0") {
  const auto out = kDir / "det.csv";
  fs::remove(out);
  CHECK(run("sweep --algos det --n-list 64,256,1024,4096 --out " + out.string()) == 0);
  std::ifstream in(out);
  const auto recs = parint::parse_csv(in);
  CHECK(recs.size() == 4);
  // same sweep on stdout gives the same bytes
  CHECK(run("sweep --algos det --n-list 64,256,1024,4096") == 0);
  CHECK(slurp(kDir / "stdout") == slurp(out));

  CHECK(run("fit --in " + out.string() + " --json") == 0);
  const auto fit = nlohmann::json::parse(slurp(kDir / "stdout"));
  REQUIRE(fit.size() == 1);
  CHECK(fit[0]["algorithm"] == "det");
  CHECK(fit[0]["points"] == 4);
  CHECK(fit[0]["slope"].get<double>() < 0.0);
}

TEST_CASE("partial failures exit 2, total failures and bad input exit 1") {
  CHECK(run("sweep --algos det --n-list 4,1024") == 2);
  CHECK(slurp(kDir / "stderr").find("row failed") != std::string::npos);
  CHECK(run("sweep --algos det --n-list 2,4") == 1);
  CHECK(run("sweep --algos det --n-list 256,64") == 1);
  CHECK(run("sweep --algos nope --n-list 64") == 1);
  CHECK(run("sweep --n-list 64 --bogus") == 1);
  CHECK(run("fit --in /nonexistent.csv") == 1);
  CHECK(run("") == 1);
  CHECK(run("--help") == 0);
}

TEST_CASE("config file with flags winning") {
  const auto cfg = kDir / "sweep.cfg";
  fs::create_directories(kDir);
  {
    std::ofstream os(cfg);
    os << "algos=det\nn-list=64,256\nfunction=wave\ntrials=2\n";
  }
  CHECK(run("sweep --config " + cfg.string()) == 0);
  {
    std::istringstream in(slurp(kDir / "stdout"));
    const auto recs = parint::parse_csv(in);
    CHECK(recs.size() == 4);
  }
  CHECK(run("sweep --config " + cfg.string() + " --n-list 64,256,1024 --trials 1") == 0);
  std::istringstream in(slurp(kDir / "stdout"));
  const auto recs = parint::parse_csv(in);
  REQUIRE(recs.size() == 3);
  CHECK(recs.back().n == 1024);
}

TEST_CASE("corpus, run and schedule subcommands") {
  CHECK(run("corpus --m 4 --random 2") == 0);
  const auto manifest = nlohmann::json::parse(slurp(kDir / "stdout"));
  CHECK(manifest["instances"].size() == 6);
  CHECK(run("corpus --m 3") == 1);

  CHECK(run("run --n 256 --seed 3") == 0);
  const auto res = nlohmann::json::parse(slurp(kDir / "stdout"));
  CHECK(res["sup_error"].get<double>() > 0.0);
  CHECK(res["metadata"]["seed"] == 3);
  CHECK(run("run --n 256 --algo det") == 1);

  CHECK(run("schedule --n 1024") == 0);
  const auto s = nlohmann::json::parse(slurp(kDir / "stdout"));
  CHECK(s["l"] == 9);
  CHECK(run("schedule --n 2") == 1);
}
