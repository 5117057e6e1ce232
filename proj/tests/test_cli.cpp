#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cajux/store.hpp"
#include "cli.hpp"
#include "oracle.hpp"

using namespace cajux;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cajux");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("cajux_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string manifest_value(const fs::path& p, const std::string& key) {
  for (const auto& [k, v] : read_manifest(p))
    if (k == key) return v;
  return {};
}

}  // namespace

TEST_CASE("verify") {
  const std::string ca54 = oracle::data_path("ca54.ca");
  auto r = run_cli({"verify", ca54, "--t", "5"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "strength 5: PASS\n");
  r = run_cli({"verify", ca54, "--t", "6"});
  CHECK(r.code == cli::kVerifyFailed);
  CHECK(r.out.find("FAIL") != std::string::npos);
  CHECK(r.out.find("uncovered columns") != std::string::npos);
  CHECK(run_cli({"verify", oracle::data_path("ca33.ca")}).code == cli::kOk);

  const auto dir = scratch("verify");
  std::ofstream(dir / "bad.ca") << "CA 2 1 2 2\n0 1\n1 7\n";
  r = run_cli({"verify", (dir / "bad.ca").string()});
  CHECK(r.code == cli::kParseError);
  CHECK(r.err.find(":3:") != std::string::npos);
  CHECK(run_cli({"verify", (dir / "absent.ca").string()}).code == cli::kMissingInput);
  CHECK(run_cli({"frobnicate"}).code == cli::kParseError);
  fs::remove_all(dir);
}

TEST_CASE("bounds and multisets") {
  CHECK(run_cli({"bounds", "3", "5", "2"}).out == "exact 10\n");
  CHECK(run_cli({"bounds", "2", "4", "3"}).out == "exact 9\n");
  CHECK(run_cli({"bounds", "--t", "1", "--k", "7", "--v", "4"}).out == "exact 4\n");
  CHECK(run_cli({"bounds", "3", "7", "3"}).out.rfind("lower ", 0) == 0);
  CHECK(run_cli({"multisets", "29", "2", "4", "3"}).out == "9 9 11\n9 10 10\n");
  CHECK(run_cli({"multisets", "7", "2", "3", "2"}).out.empty());
}

TEST_CASE("canon") {
  const auto dir = scratch("canon");
  const auto a = read_ca(fs::path(oracle::data_path("ca33.ca")));
  std::mt19937 rng(2);
  write_ca(oracle::scramble(a, rng), dir / "x.ca");
  write_ca(oracle::scramble(a, rng), dir / "y.ca");
  auto rx = run_cli({"canon", (dir / "x.ca").string(), "--out", (dir / "cx.ca").string()});
  auto ry = run_cli({"canon", (dir / "y.ca").string(), "--out", (dir / "cy.ca").string()});
  CHECK(rx.code == cli::kOk);
  CHECK(rx.out == "not canonical\n");
  CHECK(slurp(dir / "cx.ca") == slurp(dir / "cy.ca"));
  auto again = run_cli({"canon", (dir / "cx.ca").string()});
  CHECK(again.err == "already canonical\n");
  CHECK(again.out == slurp(dir / "cx.ca"));
  fs::remove_all(dir);
}

TEST_CASE("generate and search") {
  const auto dir = scratch("search");
  fs::create_directories(dir / "libs");
  auto g = run_cli({"generate", "4", "2", "3", "2", "--out", (dir / "libs" / "ca_4_2_3_2.calib").string()});
  CHECK(g.code == cli::kOk);
  CHECK(g.out == "1\n");
  CHECK(manifest_value(dir / "libs" / "ca_4_2_3_2.calib.manifest", "verdict") == "exists");
  CHECK(manifest_value(dir / "libs" / "ca_4_2_3_2.calib.manifest", "output.sha256") ==
        sha256_file(dir / "libs" / "ca_4_2_3_2.calib"));

  auto empty = run_cli({"generate", "3", "2", "3", "2", "--out", (dir / "empty.calib").string()});
  CHECK(empty.code == cli::kOk);
  CHECK(empty.out == "0\n");
  CHECK(slurp(dir / "empty.calib") == "CALIB 0 3 2 3 2\n");
  CHECK(manifest_value(dir / "empty.calib.manifest", "verdict") == "nonexistent");

  auto s = run_cli({"search", "8", "3", "4", "2", "--libs", (dir / "libs").string(), "--out", (dir / "r8").string()});
  CHECK(s.code == cli::kOk);
  CHECK(s.out.find("verdict exists") != std::string::npos);
  CHECK(fs::exists(dir / "r8" / "result_000.ca"));
  CHECK(manifest_value(dir / "r8" / "manifest.txt", "library.4.sha256") ==
        sha256_file(dir / "libs" / "ca_4_2_3_2.calib"));

  auto none = run_cli({"search", "7", "3", "4", "2", "--out", (dir / "r7").string()});
  CHECK(none.code == cli::kOk);
  CHECK(none.out.find("multisets 0") != std::string::npos);
  CHECK(manifest_value(dir / "r7" / "manifest.txt", "verdict") == "nonexistent");

  auto missing = run_cli({"search", "9", "3", "4", "2", "--libs", (dir / "libs").string()});
  CHECK(missing.code == cli::kMissingInput);
  CHECK(missing.err.find("{5}") != std::string::npos);

  auto partial = run_cli({"search", "9", "3", "4", "2", "--libs", (dir / "libs").string(), "--allow-partial",
                          "--out", (dir / "r9").string()});
  CHECK(partial.code == cli::kOk);
  const auto verdict = manifest_value(dir / "r9" / "manifest.txt", "verdict");
  CHECK((verdict == "exists" || verdict == "not-found-partial"));

  auto budget = run_cli({"generate", "12", "2", "6", "3", "--node-budget", "50", "--out", (dir / "big.calib").string()});
  CHECK(budget.code == cli::kBudget);
  CHECK(fs::exists(dir / "big.calib.partial"));
  CHECK_FALSE(fs::exists(dir / "big.calib"));
  CHECK(manifest_value(dir / "big.calib.manifest", "verdict") == "budget-exhausted");
  fs::remove_all(dir);
}

TEST_CASE("search output is identical across worker counts") {
  const auto dir = scratch("workers");
  fs::create_directories(dir / "libs");
  run_cli({"generate", "3", "1", "2", "3", "--out", (dir / "libs" / "a.calib").string()});
  std::string first;
  for (const char* w : {"1", "2", "8"}) {
    const auto out = dir / (std::string("r") + w);
    auto r = run_cli({"search", "9", "2", "3", "3", "--libs", (dir / "libs").string(), "--out", out.string(),
                      "--workers", w});
    CHECK(r.code == cli::kOk);
    std::string all;
    for (int i = 0; fs::exists(out / ("result_00" + std::to_string(i) + ".ca")); ++i)
      all += slurp(out / ("result_00" + std::to_string(i) + ".ca"));
    if (first.empty()) first = all;
    CHECK(all == first);
    CHECK_FALSE(all.empty());
  }
  fs::remove_all(dir);
}
