#include "cli_app.hpp"

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fockscope/version.hpp"
#include "output.hpp"

namespace fockscope::cli {

int run(int argc, const char* const* argv) {
  CLI::App app{"fockscope: binary-outcome photon-counting microscopy simulator"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "run configuration file (key=value)");
  app.require_subcommand(1);

  RunConfig config;
  app.add_option("--state", config.state,
                 "input state: single | tf1 | tf2 | tf3")
      ->check(CLI::IsMember({"single", "tf1", "tf2", "tf3"}));
  app.add_option("--visibility", config.visibility,
                 "visibility V (default: per-state table)");
  app.add_option("--peak-height", config.peak_height,
                 "peak height h (default: per-state table)");
  app.add_option("--shots", config.shots,
                 "measurements per pixel / grid point (0 = command default)");
  app.add_option("--reps", config.reps, "repetitions for averaged quantities");
  app.add_option("--images", config.images, "pictures per metrics aggregate");
  app.add_option("--strategy", config.strategy,
                 "scan strategy: fixed | lock | two-seq")
      ->check(CLI::IsMember({"fixed", "lock", "two-seq"}));
  app.add_option("--offset", config.offset,
                 "offset phase (default: strategy rule)");
  app.add_option("--split", config.split,
                 "two-seq: measurements in the first sequence (-1 = half)");
  app.add_option("--grid-points", config.grid_points, "calibration grid size");
  app.add_option("--curve-points", config.curve_points,
                 "sensitivity curve grid size");
  app.add_option("--width", config.width, "field width in pixels");
  app.add_option("--height", config.height, "field height in pixels");
  app.add_option("--seed", config.seed, "random seed");
  app.add_option("--out", config.out, "output directory")
      ->envname("FOCKSCOPE_OUT");
  app.add_option("--threads", config.threads, "worker threads for scans");
  app.add_flag("--binary-pgm", config.binary_pgm,
               "write P5 graymaps instead of P2");

  auto* cmd_calibrate =
      app.add_subcommand("calibrate", "fit the averaged signal curve");
  auto* cmd_sensitivity = app.add_subcommand(
      "sensitivity", "tabulate phase sensitivity and MLE uncertainty");
  auto* cmd_image =
      app.add_subcommand("image", "reconstruct a microscopy image");
  auto* cmd_reproduce = app.add_subcommand(
      "reproduce-all", "run the whole simulation matrix with a summary");
  for (auto* cmd : {cmd_calibrate, cmd_sensitivity, cmd_image, cmd_reproduce}) {
    cmd->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (cmd_calibrate->parsed()) {
      const auto out = run_calibrate(config);
      std::cout << "calibration: a = " << num17(out.curve.scale())
                << ", b = " << num17(out.curve.offset())
                << ", theta_dark = " << num17(out.curve.theta_dark()) << "\n"
                << "wrote " << out.record_path.string() << "\n";
    } else if (cmd_sensitivity->parsed()) {
      const auto csv = run_sensitivity(config);
      std::cout << "wrote " << csv.string() << "\n";
    } else if (cmd_image->parsed()) {
      const auto out = run_image(config);
      std::cout << "lsd = " << num17(out.metrics.lsd)
                << ", rmse = " << num17(out.metrics.rmse_mean)
                << ", singular = " << out.metrics.singular_pixels << "\n"
                << "wrote " << out.metrics_path.string() << "\n";
    } else if (cmd_reproduce->parsed()) {
      const auto out = run_reproduce_all(config);
      for (const auto& check : out.checks) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.name << "\n";
      }
      std::cout << "wrote " << out.summary_path.string() << "\n";
      return out.all_passed ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace fockscope::cli
