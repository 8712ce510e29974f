#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fockscope/microscopy.hpp"

namespace fockscope::cli {

/// Resolved knobs of one run. String/sentinel defaults are filled in by
/// resolve(): visibility/peak height from the per-state simulation table,
/// shot budgets from the 600-photons-per-pixel rule.
struct RunConfig {
  std::string state = "tf1";
  double visibility = -1.0;          // < 0: table default for the state
  double peak_height = -1.0;
  std::int64_t shots = 0;            // 0: command default (see resolve)
  std::int64_t reps = 20;            // repetitions for averages / error bars
  int images = 20;                   // pictures per metrics aggregate
  std::string strategy = "fixed";    // fixed | lock | two-seq
  double offset = std::nan("");      // strategy default when unset
  std::int64_t split = -1;           // two-seq N1; -1: shots/2
  int grid_points = 201;             // calibration grid
  int curve_points = 121;            // sensitivity curve grid
  int width = 60;
  int height = 30;
  std::uint64_t seed = 20240814;
  std::string out = "fockscope-out";
  int threads = 1;
  bool binary_pgm = false;
};

/// Imperfection parameters used in the simulations, by total photon number:
/// N=1: V=0.994, h=0.99; N=2: 0.983, 0.985; N=4: 0.97, 0.98; N=6: 0.94, 0.975.
ImperfectionParams table_imperfections(const InputState& input);

struct ResolvedRun {
  InputState input;
  ImperfectionParams params;
  std::int64_t scan_shots = 0;       // measurements per pixel (600 photons)
  std::int64_t point_shots = 0;      // measurements per calibration/MLE point
  std::filesystem::path out_dir;
};

ResolvedRun resolve(const RunConfig& config);

/// Effective-configuration echo, reparsable through --config.
void write_config_echo(const std::filesystem::path& path,
                       const RunConfig& config);

struct CalibrateOutput {
  CalibrationCurve curve;
  std::filesystem::path record_path;
  std::filesystem::path csv_path;
  std::filesystem::path manifest_path;
};

struct ImageMetrics {
  double lsd = 0.0;
  double lsd_reference = std::nan("");   // single-photon fixed scan
  double enhancement_ratio = std::nan("");
  double rmse_mean = 0.0;
  int singular_pixels = 0;               // dark-fringe clamps + degenerate
  int clamped_pixels = 0;                // any out-of-range rate
  Rect region;
  double offset = 0.0;
  double theta_min = 0.0;
  double theta_dark = 0.0;
};

struct ImageOutput {
  ImageMetrics metrics;
  std::filesystem::path metrics_path;
  std::filesystem::path truth_pgm;
  std::filesystem::path estimate_pgm;
  std::filesystem::path manifest_path;
};

struct SummaryCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string target;
};

struct ReproduceOutput {
  bool all_passed = false;
  std::vector<SummaryCheck> checks;
  std::filesystem::path summary_path;
  std::filesystem::path manifest_path;
};

CalibrateOutput run_calibrate(const RunConfig& config);
std::filesystem::path run_sensitivity(const RunConfig& config);
ImageOutput run_image(const RunConfig& config);
ReproduceOutput run_reproduce_all(const RunConfig& config);

}  // namespace fockscope::cli
