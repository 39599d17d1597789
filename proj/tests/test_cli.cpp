#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = QDNUC_CLI_PATH;
const std::string kConfigs = QDNUC_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qdnuc_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const fs::path& err = {}) {
  std::string cmd = kCli + " " + args + " > /dev/null";
  cmd += err.empty() ? " 2> /dev/null" : " 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

const char* kSmallMap = R"({"model": {"b_field": 5.0},
  "sweep": {"rabi": {"min": 5, "max": 30, "steps": 6}, "gamma_eff": {"min": 5, "max": 35, "steps": 7}}})";

}  // namespace

TEST(Cli, CoolMapWritesCsvSummaryAndMetadata) {
  const auto dir = scratch("map");
  const auto cfg = write_config(dir, kSmallMap);
  ASSERT_EQ(run("cool-map --config " + cfg.string() + " --out " + (dir / "out").string() + " --plot"), 0);
  const std::string csv = slurp(dir / "out" / "cool_map.csv");
  EXPECT_EQ(csv.rfind("rabi_mhz,gamma_eff_mhz,", 0), 0u);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 43);
  const auto meta = nlohmann::json::parse(slurp(dir / "out" / "metadata.json"));
  EXPECT_EQ(meta["command"], "cool-map");
  EXPECT_EQ(meta["config"]["model"]["b_field"], 5.0);
  EXPECT_TRUE(fs::exists(dir / "out" / "plot_cool-map.py"));
  const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  EXPECT_GT(summary["optimum"]["performance"].get<double>(), 1.0);
}

TEST(Cli, RerunIsByteIdenticalAndIndependentOfWorkers) {
  const auto dir = scratch("determinism");
  const auto cfg = write_config(dir, kSmallMap);
  ASSERT_EQ(run("cool-map --config " + cfg.string() + " --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run("cool-map --config " + cfg.string() + " --out " + (dir / "b").string()), 0);
  ASSERT_EQ(run("cool-map --config " + cfg.string() + " --workers 3 --out " + (dir / "c").string()), 0);
  EXPECT_EQ(slurp(dir / "a" / "cool_map.csv"), slurp(dir / "b" / "cool_map.csv"));
  EXPECT_EQ(slurp(dir / "a" / "summary.json"), slurp(dir / "b" / "summary.json"));
  EXPECT_EQ(slurp(dir / "a" / "cool_map.csv"), slurp(dir / "c" / "cool_map.csv"));
}

TEST(Cli, SinglePointGridGivesSingleRow) {
  const auto dir = scratch("single");
  const auto cfg = write_config(dir, R"({"model": {"b_field": 5.0},
    "sweep": {"rabi": {"min": 15, "max": 15, "steps": 1}, "gamma_eff": {"min": 19, "max": 19, "steps": 1}}})");
  ASSERT_EQ(run("cool-map --config " + cfg.string() + " --out " + dir.string()), 0);
  const std::string csv = slurp(dir / "cool_map.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Cli, SingleDetuningSingleTauSpectrum) {
  const auto dir = scratch("spectrum1");
  const auto cfg = write_config(dir, R"({"model": {"t2_us": 1.5}, "drive": {"rabi": 3.3},
    "sweep": {"detuning": {"min": 0, "max": 0, "steps": 1}, "tau": {"min": 0.1, "max": 0.1, "steps": 1}},
    "spectrum": {"overhauser": {"mode": "delta"}, "slices": [[0.0, 1.0]]}})");
  ASSERT_EQ(run("spectrum --config " + cfg.string() + " --out " + dir.string()), 0);
  const std::string csv = slurp(dir / "spectrum.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Cli, JsonFormat) {
  const auto dir = scratch("json");
  const auto cfg = write_config(dir, kSmallMap);
  ASSERT_EQ(run("cool-map --format json --config " + cfg.string() + " --out " + dir.string()), 0);
  const auto j = nlohmann::json::parse(slurp(dir / "cool_map.json"));
  EXPECT_EQ(j["rows"].size(), 42u);
}

TEST(Cli, ConfigFromEnvironment) {
  const auto dir = scratch("env");
  const auto cfg = write_config(dir, R"({"model": {"n_nuclei": 20000}, "sweep": {"beta": {"min": 2, "max": 3, "steps": 3}}})");
  ::setenv("QDNUC_CONFIG", cfg.c_str(), 1);
  const int rc = run("thermometry --out " + dir.string());
  ::unsetenv("QDNUC_CONFIG");
  ASSERT_EQ(rc, 0);
  const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(s["n_nuclei"], 20000);
  // Three grid rows plus the beta = inf row.
  const std::string csv = slurp(dir / "thermometry.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_NE(csv.find("inf,-30000,0,"), std::string::npos);
}

TEST(Cli, ConfigErrorExitsTwoWithFieldInJson) {
  const auto dir = scratch("badcfg");
  const auto cfg = write_config(dir, R"({"model": {"spin": 2.5}})");
  ASSERT_EQ(run("cool-map --config " + cfg.string() + " --out " + dir.string(), dir / "err.txt"), 2);
  const auto e = nlohmann::json::parse(slurp(dir / "err.txt"));
  EXPECT_EQ(e["error"], "config");
  EXPECT_EQ(e["field"], "model.spin");
}

TEST(Cli, MalformedJsonExitsTwo) {
  const auto dir = scratch("malformed");
  const auto cfg = write_config(dir, "{ model: ");
  EXPECT_EQ(run("cool-map --config " + cfg.string() + " --out " + dir.string()), 2);
  EXPECT_EQ(run("cool-map --config " + (dir / "missing.json").string() + " --out " + dir.string()), 2);
}

TEST(Cli, UnknownFlagExitsTwo) {
  const auto dir = scratch("flag");
  EXPECT_EQ(run("cool-map --bogus 1 --out " + dir.string(), dir / "err.txt"), 2);
  EXPECT_NO_THROW(nlohmann::json::parse(slurp(dir / "err.txt")));
  EXPECT_EQ(run("cool-map --format xml --out " + dir.string()), 2);
}

TEST(Cli, NumericalFailureExitsThree) {
  const auto dir = scratch("numerical");
  const auto cfg = write_config(dir, R"({"thermometry": {"variance_targets": [1e9]},
    "sweep": {"beta": {"min": 2, "max": 3, "steps": 2}}})");
  ASSERT_EQ(run("thermometry --config " + cfg.string() + " --out " + dir.string(), dir / "err.txt"), 3);
  const auto e = nlohmann::json::parse(slurp(dir / "err.txt"));
  EXPECT_EQ(e["error"], "domain");
}

TEST(Cli, FitCommandReadsCsvColumns) {
  const auto dir = scratch("fit");
  {
    std::ofstream csv(dir / "data.csv");
    csv << "t_us,y\n";
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.001 * i;
      csv << t << "," << std::exp(-std::pow(t / 0.026, 1.6)) << "\n";
    }
  }
  ASSERT_EQ(run("fit --input " + (dir / "data.csv").string() +
                " --x t_us --y y --model stretched_exponential --out " + (dir / "out").string()),
            0);
  const auto j = nlohmann::json::parse(slurp(dir / "out" / "fit.json"));
  EXPECT_NEAR(j["fit"]["parameters"][0]["value"].get<double>(), 0.026, 0.00026);
  EXPECT_EQ(run("fit --input " + (dir / "data.csv").string() + " --x nope --y y --model stretched_exponential --out " +
                (dir / "out").string()),
            2);
}
