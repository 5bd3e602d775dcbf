#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "mrw/cli.hpp"

namespace fs = std::filesystem;
using mrw::cli::run;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mrw_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

const fs::path kFixture = fs::path(MRW_TEST_DATA_DIR) / "mrw_lambda025.csv";

}  // namespace

TEST_CASE("simulate is deterministic") {
  const auto a = fresh_dir("sim_a");
  const auto b = fresh_dir("sim_b");
  const std::vector<std::string> args{"simulate", "--lambda", "0.2", "--T", "1250", "--n", "1250", "--seed", "7"};
  auto with_out = [&](const fs::path& dir) {
    auto v = args;
    v.insert(v.end(), {"--out-dir", dir.string()});
    return v;
  };
  REQUIRE(run(with_out(a)) == 0);
  REQUIRE(run(with_out(b)) == 0);
  CHECK(slurp(a / "simulate.csv") == slurp(b / "simulate.csv"));
  const auto rows = lines(a / "simulate.csv");
  CHECK(rows.size() == 1251);
  CHECK(rows.front() == "index,increment,cumulative");
  CHECK(fs::exists(a / "simulate.manifest.json"));
}

TEST_CASE("ensemble simulation writes a seed column") {
  const auto dir = fresh_dir("ensemble");
  REQUIRE(run({"simulate", "--n", "300", "--ensemble", "3", "--out-dir", dir.string()}) == 0);
  const auto rows = lines(dir / "simulate_ensemble.csv");
  CHECK(rows.size() == 901);
  CHECK(rows.front().find("seed") != std::string::npos);
}

TEST_CASE("manifest reruns reproduce outputs bit for bit") {
  const auto a = fresh_dir("manifest_a");
  const auto b = fresh_dir("manifest_b");
  REQUIRE(run({"test", "--input", kFixture.string(), "--sims", "100", "--seed", "3", "--variant",
               "student-t", "--out-dir", a.string()}) == 0);
  const auto manifest = nlohmann::json::parse(slurp(a / "test.manifest.json"));
  CHECK(manifest.at("subcommand") == "test");
  CHECK(manifest.at("config").at("variant") == "student-t");
  CHECK(manifest.contains("build"));
  REQUIRE(run({"test", "--config", (a / "test.manifest.json").string(), "--out-dir", b.string()}) == 0);
  CHECK(slurp(a / "report.csv") == slurp(b / "report.csv"));
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
}

TEST_CASE("explicit flags override config values") {
  const auto dir = fresh_dir("layering");
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"lambda": 0.3, "n": 400, "seed": 5})";
  REQUIRE(run({"simulate", "--config", cfg.string(), "--lambda", "0.1", "--out-dir", dir.string()}) == 0);
  const auto config = nlohmann::json::parse(slurp(dir / "simulate.manifest.json")).at("config");
  CHECK(config.at("lambda") == 0.1);
  CHECK(config.at("n") == 400);
  CHECK(config.at("seed") == 5);
  CHECK(lines(dir / "simulate.csv").size() == 401);
}

TEST_CASE("calibrate recovers the fixture's intermittency") {
  const auto dir = fresh_dir("calibrate");
  const auto before = slurp(kFixture);
  REQUIRE(run({"calibrate", "--input", kFixture.string(), "--dump-curve", "--out-dir", dir.string()}) == 0);
  CHECK(slurp(kFixture) == before);
  const auto rows = lines(dir / "calibrate.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "lambda,T,sigma,fit_r2,fit_lo,fit_hi");
  const double lambda = std::stod(rows[1].substr(0, rows[1].find(',')));
  CHECK(lambda >= 0.20);
  CHECK(lambda <= 0.30);
  CHECK(lines(dir / "logvol_autocov.csv").size() == 101);
}

TEST_CASE("ghe and zeta outputs") {
  const auto dir = fresh_dir("ghe");
  REQUIRE(run({"ghe", "--input", kFixture.string(), "--q", "1,2,3", "--weighted", "--out-dir",
               dir.string()}) == 0);
  auto rows = lines(dir / "ghe.csv");
  CHECK(rows.size() == 4);
  CHECK(rows[0] == "q,h,h_std");
  REQUIRE(run({"zeta", "--input", kFixture.string(), "--out-dir", dir.string()}) == 0);
  rows = lines(dir / "zeta.csv");
  CHECK(rows.size() == 7);
  CHECK(rows[0] == "q,zeta,err");
  REQUIRE(run({"fbm", "--hurst", "0.7", "--n", "512", "--out-dir", dir.string()}) == 0);
  CHECK(lines(dir / "fbm.csv").size() == 513);
}

TEST_CASE("test on a simulated path against its own null") {
  const auto dir = fresh_dir("selftest");
  REQUIRE(run({"simulate", "--lambda", "0.2", "--T", "1250", "--n", "4470", "--seed", "11",
               "--out-dir", dir.string()}) == 0);
  REQUIRE(run({"test", "--input", (dir / "simulate.csv").string(), "--sims", "300", "--out-dir",
               dir.string()}) == 0);
  const auto rows = lines(dir / "report.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] ==
        "name,variant,lambda,T,sigma,fit_r2,q025,q50,q975,exceedance_pct,n_windows,n_sims,seed");
  std::vector<std::string> cells;
  std::stringstream ss(rows[1]);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 13);
  const double pct = std::stod(cells[9]);
  CHECK(pct >= 0.0);
  CHECK(pct <= 25.0);
  CHECK(cells[10] == "33");
  CHECK(lines(dir / "trace.csv").size() == 34);
}

TEST_CASE("batch test writes a report row per file and a histogram") {
  const auto in = fresh_dir("batch_in");
  const auto out = fresh_dir("batch_out");
  fs::copy_file(kFixture, in / "a.csv");
  fs::copy_file(kFixture, in / "b.csv");
  std::ofstream(in / "short.csv") << "price\n1\n2\n3\n";
  run({"batch-test", "--input-dir", in.string(), "--sims", "100", "--out-dir", out.string()});
  const auto report = lines(out / "batch_report.csv");
  CHECK(report.size() == 4);
  CHECK(report[0].rfind("status,", 0) == 0);
  const auto hist = lines(out / "exceedance_histogram.csv");
  CHECK(hist.size() == 21);
  int total = 0;
  for (std::size_t i = 1; i < hist.size(); ++i) total += std::stoi(hist[i].substr(hist[i].rfind(',') + 1));
  CHECK(total == 2);
}

TEST_CASE("default output directory comes from the environment") {
  const auto dir = fresh_dir("env");
  ::setenv("MRW_OUTPUT_DIR", dir.c_str(), 1);
  CHECK(mrw::cli::default_out_dir() == dir);
  REQUIRE(run({"fbm", "--n", "64"}) == 0);
  CHECK(fs::exists(dir / "fbm.csv"));
  ::unsetenv("MRW_OUTPUT_DIR");
}

TEST_CASE("exit codes") {
  const auto dir = fresh_dir("exit");
  const auto out = dir.string();
  CHECK(run(std::vector<std::string>{}) == 1);
  CHECK(run({"bogus"}) == 1);
  CHECK(run({"simulate", "--no-such-flag"}) == 1);
  CHECK(run({"simulate", "--lambda", "-0.1", "--out-dir", out}) == 1);
  CHECK(run({"simulate", "--variant", "student-t", "--nu", "2", "--out-dir", out}) == 1);
  CHECK(run({"ghe", "--input", (dir / "missing.csv").string(), "--out-dir", out}) == 2);
  std::ofstream(dir / "short.csv") << "price\n1\n2\n3\n4\n5\n";
  CHECK(run({"test", "--input", (dir / "short.csv").string(), "--out-dir", out}) == 2);
  std::ofstream flat(dir / "flat.csv");
  flat << "price\n";
  for (int i = 0; i < 600; ++i) flat << "100\n";
  flat.close();
  CHECK(run({"ghe", "--input", (dir / "flat.csv").string(), "--out-dir", out}) == 3);
}
