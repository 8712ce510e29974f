#include <filesystem>
#include <fstream>
#include <string>

#include "cli_app.hpp"
#include "commands.hpp"
#include "doctest.h"
#include "output.hpp"

using namespace fockscope;
using namespace fockscope::cli;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> storage(args);
  std::vector<const char*> argv = {"fockscope"};
  for (const auto& arg : storage) argv.push_back(arg.c_str());
  return fockscope::cli::run(static_cast<int>(argv.size()), argv.data());
}

// checksum list of a manifest, without the wall-clock line
std::vector<std::string> checksum_lines(const fs::path& manifest) {
  std::ifstream in(manifest);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("fnv1a64", 0) == 0) lines.push_back(line);
  }
  return lines;
}

RunConfig small_config(const fs::path& out) {
  RunConfig config;
  config.out = out.string();
  config.images = 2;
  config.width = 20;
  config.height = 10;
  config.reps = 5;
  config.curve_points = 21;
  return config;
}

}  // namespace

TEST_CASE("table imperfections match the simulation parameters") {
  CHECK(table_imperfections(InputState::single_photon()).visibility == 0.994);
  CHECK(table_imperfections(InputState::single_photon()).peak_height == 0.99);
  CHECK(table_imperfections(InputState::twin_fock(1)).visibility == 0.983);
  CHECK(table_imperfections(InputState::twin_fock(2)).peak_height == 0.98);
  CHECK(table_imperfections(InputState::twin_fock(3)).visibility == 0.94);
  CHECK_THROWS_AS(table_imperfections(InputState::twin_fock(5)),
                  std::invalid_argument);
}

TEST_CASE("config resolution fills budgets and parameters") {
  RunConfig config;
  config.state = "tf3";
  const ResolvedRun run = resolve(config);
  CHECK(run.input == InputState::twin_fock(3));
  CHECK(run.params.visibility == 0.94);
  CHECK(run.scan_shots == 100);   // 600 photons per pixel
  CHECK(run.point_shots == 100);

  config.state = "single";
  CHECK(resolve(config).scan_shots == 600);

  config.shots = 250;
  CHECK(resolve(config).scan_shots == 250);
  CHECK(resolve(config).point_shots == 250);

  config.visibility = 0.5;
  CHECK(resolve(config).params.visibility == 0.5);
  CHECK(resolve(config).params.peak_height == 0.99);
}

TEST_CASE("calibrate command writes a reproducible record") {
  TempDir dir_a("fockscope_cli_cal_a");
  TempDir dir_b("fockscope_cli_cal_b");

  RunConfig config;
  config.state = "tf3";
  config.seed = 77;
  config.out = dir_a.path.string();
  const auto out_a = run_calibrate(config);
  // converged analytic value a = 2hV/(1+V) = 0.94485...
  CHECK(std::abs(out_a.curve.scale() - 0.9448) < 0.01);
  CHECK(fs::exists(out_a.record_path));
  CHECK(fs::exists(out_a.csv_path));

  config.out = dir_b.path.string();
  const auto out_b = run_calibrate(config);
  CHECK(checksum_lines(out_a.manifest_path) ==
        checksum_lines(out_b.manifest_path));

  const auto record = read_kv(out_a.record_path);
  CHECK(record.at("") == "fockscope calibration record v1");
  CHECK(record.at("state") == "tf3");
  CHECK(std::stod(record.at("scale_a")) == out_a.curve.scale());

  // a loss-free model fits the identity
  RunConfig ideal = config;
  ideal.visibility = 1.0;
  ideal.peak_height = 1.0;
  ideal.out = (dir_a.path / "ideal").string();
  const auto out_ideal = run_calibrate(ideal);
  CHECK(std::abs(out_ideal.curve.scale() - 1.0) < 5e-3);
  CHECK(std::abs(out_ideal.curve.offset()) < 5e-3);
}

TEST_CASE("sensitivity table marks divergences and flat ideal columns") {
  TempDir dir("fockscope_cli_sens");
  RunConfig config;
  config.state = "single";
  config.reps = 5;
  config.curve_points = 11;
  config.out = dir.path.string();
  const auto csv = run_sensitivity(config);

  std::ifstream in(csv);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (start <= line.size()) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(cells);
  }
  REQUIRE(rows.size() == 11);
  // endpoints diverge for both the ideal and the fitted curve
  CHECK(rows.front()[1] == "inf");
  CHECK(rows.front()[2] == "inf");
  CHECK(rows.back()[2] == "inf");
  // interior ideal column is identically 1 (Fisher information = 1)
  for (std::size_t r = 1; r + 1 < rows.size(); ++r) {
    CHECK(std::stod(rows[r][1]) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("image command reports speckles for the fixed six-photon scan") {
  TempDir dir("fockscope_cli_img_fixed");
  RunConfig config = small_config(dir.path);
  config.state = "tf3";
  config.strategy = "fixed";
  config.width = 60;
  config.height = 30;
  const auto out = run_image(config);
  CHECK(out.metrics.singular_pixels > 0);
  CHECK(fs::exists(out.truth_pgm));
  CHECK(fs::exists(out.estimate_pgm));
  CHECK(fs::exists(out.metrics_path));
  CHECK(out.metrics.enhancement_ratio > 1.0);
}

TEST_CASE("image command: two-sequence scan has no flagged pixels") {
  TempDir dir("fockscope_cli_img_twoseq");
  RunConfig config = small_config(dir.path);
  config.state = "tf3";
  config.strategy = "two-seq";
  const auto out = run_image(config);
  CHECK(out.metrics.singular_pixels == 0);
  CHECK(out.metrics.rmse_mean < 0.1);
}

TEST_CASE("config echo round-trips through --config") {
  TempDir dir_a("fockscope_cli_echo_a");
  TempDir dir_b("fockscope_cli_echo_b");

  CHECK(run_cli({"calibrate", "--state", "tf2", "--seed", "123",
                 "--grid-points", "101", "--shots", "50", "--reps", "4",
                 "--out", dir_a.path.string()}) == 0);
  const fs::path echo = dir_a.path / "config_echo.ini";
  REQUIRE(fs::exists(echo));

  // flags win over the config file: only the output directory moves
  CHECK(run_cli({"calibrate", "--config", echo.string(), "--out",
                 dir_b.path.string()}) == 0);
  CHECK(checksum_lines(dir_a.path / "manifest.txt") ==
        checksum_lines(dir_b.path / "manifest.txt"));
}

TEST_CASE("cli rejects bad invocations") {
  CHECK(run_cli({"calibrate", "--state", "noon"}) != 0);
  CHECK(run_cli({}) != 0);
  CHECK(run_cli({"--version"}) == 0);
}

TEST_CASE("the output root falls back to the environment variable") {
  TempDir dir("fockscope_cli_env");
  setenv("FOCKSCOPE_OUT", dir.path.c_str(), 1);
  CHECK(run_cli({"calibrate", "--state", "tf1", "--grid-points", "51",
                 "--reps", "3"}) == 0);
  unsetenv("FOCKSCOPE_OUT");
  CHECK(fs::exists(dir.path / "calibration_tf1.txt"));
}

TEST_CASE("missing output directories are created") {
  TempDir dir("fockscope_cli_mkdir");
  const fs::path nested = dir.path / "a" / "b" / "c";
  RunConfig config;
  config.state = "tf1";
  config.grid_points = 51;
  config.reps = 3;
  config.out = nested.string();
  const auto out = run_calibrate(config);
  CHECK(fs::exists(out.record_path));
}
