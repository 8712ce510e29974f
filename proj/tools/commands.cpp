#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fockscope/pgm.hpp"
#include "fockscope/version.hpp"
#include "output.hpp"

namespace fockscope::cli {

namespace {

namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;
constexpr double kFieldLo = 0.1;
constexpr double kFieldHi = 0.537;

// independent random domains inside one seeded run
constexpr std::uint64_t kCalibrationSalt = 0xca11;
constexpr std::uint64_t kSensitivitySalt = 0x5e45;
constexpr std::uint64_t kImageSalt = 0x1000;
constexpr std::uint64_t kReferenceSalt = 0x4ef0;
constexpr std::uint64_t kSweepSalt = 0x54ee;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = lo + (hi - lo) * k / (n - 1);
  return out;
}

std::string gray_comment(const RunConfig& config) {
  std::ostringstream s;
  s << "phase [" << kFieldLo << ", " << kFieldHi << "] -> [0, 65535];"
    << " x = pi*i/" << config.width - 1 << ", y = 2.4*(j/"
    << config.height - 1 << " - 0.5)";
  return s.str();
}

CalibrationFit calibrated_curve(const ResolvedRun& run,
                                const RunConfig& config,
                                const RandomSource& source) {
  const ProbabilityModel model(run.input, run.params);
  return calibrate(model, linspace(-kPi, kPi, config.grid_points),
                   run.point_shots, config.reps, source);
}

void write_calibration_record(const fs::path& path, const ResolvedRun& run,
                              const RunConfig& config,
                              const CalibrationCurve& curve) {
  write_kv(path, "fockscope calibration record v1",
           {{"state", run.input.name()},
            {"total_photons", std::to_string(run.input.total_photons())},
            {"visibility", num17(run.params.visibility)},
            {"peak_height", num17(run.params.peak_height)},
            {"scale_a", num17(curve.scale())},
            {"offset_b", num17(curve.offset())},
            {"theta_dark", num17(curve.theta_dark())},
            {"residual_rms", num17(curve.residual_rms)},
            {"grid_points", std::to_string(curve.fit_points)},
            {"shots_per_point", std::to_string(run.point_shots)},
            {"repetitions", std::to_string(config.reps)},
            {"seed", std::to_string(config.seed)}});
}

void write_calibration_csv(const fs::path& path, const CalibrationFit& fit) {
  std::ofstream out(path);
  out << "theta,mean_rate,std_rate\n";
  for (const auto& point : fit.points) {
    out << num17(point.theta) << "," << num17(point.mean_rate) << ","
        << num17(point.std_rate) << "\n";
  }
}

double sensitivity_or_inf(const CalibrationCurve& curve, double theta) {
  try {
    return sensitivity(curve, theta, 1);
  } catch (const singular_point_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

ScanStrategy make_strategy(const RunConfig& config, const ResolvedRun& run,
                           const CalibrationCurve& curve, double theta_min,
                           double* offset_out) {
  if (config.strategy == "fixed") {
    const double offset =
        std::isnan(config.offset) ? theta_min - kFieldLo : config.offset;
    *offset_out = offset;
    return FixedOffsetStrategy{offset};
  }
  if (config.strategy == "lock") {
    *offset_out = 0.0;
    return PhaseLockStrategy{theta_min};
  }
  if (config.strategy == "two-seq") {
    const double offset = std::isnan(config.offset)
                              ? -0.3 * curve.theta_dark()
                              : config.offset;
    *offset_out = offset;
    const std::int64_t n1 =
        config.split >= 0 ? config.split : run.scan_shots / 2;
    return TwoSequenceStrategy{offset, n1, run.scan_shots - n1};
  }
  throw std::invalid_argument("unknown strategy: " + config.strategy);
}

struct ScanSet {
  std::vector<ImageEstimate> images;
  double lsd = 0.0;
  double rmse_mean = 0.0;
  int singular = 0;
  int clamped = 0;
  Rect region;
};

ScanSet scan_and_measure(const PhaseField& field, const RunConfig& config,
                         const ScanStrategy& strategy,
                         const CalibrationCurve& curve, double offset,
                         double theta_min, std::int64_t shots,
                         std::uint64_t salt) {
  ScanSet set;
  const RandomSource source(config.seed);
  for (int r = 0; r < config.images; ++r) {
    ScanConfig scan{strategy, shots, curve,
                    source.fork(salt + static_cast<std::uint64_t>(r)).seed(),
                    config.threads};
    set.images.push_back(run_scan(field, scan));
  }
  if (std::holds_alternative<FixedOffsetStrategy>(strategy)) {
    set.region = optimal_region(field, offset, theta_min);
  } else {
    set.region = Rect{0, 0, field.width, field.height};
  }
  if (set.region.empty()) {
    set.region = Rect{0, 0, field.width, field.height};
  }
  set.lsd = local_standard_deviation(set.images, field, set.region);
  for (const auto& image : set.images) {
    set.rmse_mean += rmse(image, field);
    set.singular += count_singular(image);
    set.clamped += count_flagged(image);
  }
  set.rmse_mean /= set.images.size();
  return set;
}

void append_summary(std::vector<SummaryCheck>& checks, const std::string& name,
                    bool pass, double value, const std::string& target) {
  checks.push_back(SummaryCheck{name, pass, value, target});
}

bool within(double value, double target, double rel) {
  return std::abs(value - target) <= rel * target;
}

}  // namespace

ImperfectionParams table_imperfections(const InputState& input) {
  switch (input.total_photons()) {
    case 1:
      return ImperfectionParams{0.994, 0.99};
    case 2:
      return ImperfectionParams{0.983, 0.985};
    case 4:
      return ImperfectionParams{0.97, 0.98};
    case 6:
      return ImperfectionParams{0.94, 0.975};
    default:
      throw std::invalid_argument(
          "no tabulated imperfections for " + input.name() +
          "; pass --visibility and --peak-height explicitly");
  }
}

ResolvedRun resolve(const RunConfig& config) {
  ResolvedRun run{InputState::from_name(config.state), ImperfectionParams{},
                  0, 0, fs::path(config.out)};
  if (config.visibility >= 0.0 && config.peak_height >= 0.0) {
    run.params = ImperfectionParams{config.visibility, config.peak_height};
  } else {
    run.params = table_imperfections(run.input);
    if (config.visibility >= 0.0) run.params.visibility = config.visibility;
    if (config.peak_height >= 0.0) run.params.peak_height = config.peak_height;
  }
  run.params.validate();
  const int photons = run.input.total_photons();
  run.scan_shots = config.shots > 0 ? config.shots : 600 / photons;
  run.point_shots = config.shots > 0 ? config.shots : 100;
  return run;
}

void write_config_echo(const fs::path& path, const RunConfig& config) {
  write_kv(path, "# fockscope effective configuration (reparse with --config)",
           {{"state", config.state},
            {"visibility", num17(config.visibility)},
            {"peak-height", num17(config.peak_height)},
            {"shots", std::to_string(config.shots)},
            {"reps", std::to_string(config.reps)},
            {"images", std::to_string(config.images)},
            {"strategy", config.strategy},
            {"offset", std::isnan(config.offset) ? "nan" : num17(config.offset)},
            {"split", std::to_string(config.split)},
            {"grid-points", std::to_string(config.grid_points)},
            {"curve-points", std::to_string(config.curve_points)},
            {"width", std::to_string(config.width)},
            {"height", std::to_string(config.height)},
            {"seed", std::to_string(config.seed)},
            {"threads", std::to_string(config.threads)},
            {"binary-pgm", config.binary_pgm ? "true" : "false"},
            {"out", config.out}});
}

CalibrateOutput run_calibrate(const RunConfig& config) {
  Timer timer;
  const ResolvedRun run = resolve(config);
  fs::create_directories(run.out_dir);
  const auto fit = calibrated_curve(
      run, config, RandomSource(config.seed).fork(kCalibrationSalt));

  CalibrateOutput out{fit.curve, run.out_dir / ("calibration_" +
                                                run.input.name() + ".txt"),
                      run.out_dir / ("calibration_" + run.input.name() + ".csv"),
                      run.out_dir / "manifest.txt"};
  write_calibration_record(out.record_path, run, config, fit.curve);
  write_calibration_csv(out.csv_path, fit);
  write_config_echo(run.out_dir / "config_echo.ini", config);

  Manifest manifest("calibrate");
  manifest.add_file(run.out_dir, out.record_path);
  manifest.add_file(run.out_dir, out.csv_path);
  manifest.write(out.manifest_path, timer.seconds());
  return out;
}

fs::path run_sensitivity(const RunConfig& config) {
  Timer timer;
  const ResolvedRun run = resolve(config);
  fs::create_directories(run.out_dir);
  const auto fit = calibrated_curve(
      run, config, RandomSource(config.seed).fork(kCalibrationSalt));
  const CalibrationCurve& curve = fit.curve;
  const CalibrationCurve ideal = CalibrationCurve::ideal(run.input);
  const PriorInterval prior{0.0, curve.theta_dark()};
  const RandomSource mle_source = RandomSource(config.seed).fork(kSensitivitySalt);

  const fs::path csv_path =
      run.out_dir / ("sensitivity_" + run.input.name() + ".csv");
  std::ofstream out(csv_path);
  const int photons = run.input.total_photons();
  out << "# state = " << run.input.name() << "\n";
  out << "# shot_noise_limit = " << num17(shot_noise_limit(photons)) << "\n";
  out << "# qcrb = " << num17(quantum_crb(photons)) << "\n";
  out << "# shots_per_estimate = " << run.point_shots << "\n";
  out << "# repetitions = " << config.reps << "\n";
  out << "theta,sensitivity_ideal,sensitivity_fitted,mle_sigma_sqrt_shots\n";

  std::uint64_t stream_id = 0;
  for (double theta : linspace(0.0, curve.theta_dark(), config.curve_points)) {
    double sigma_sum = 0.0;
    int sigma_count = 0;
    for (std::int64_t r = 0; r < config.reps; ++r) {
      auto stream = mle_source.stream(stream_id++);
      const auto record =
          simulate_counts(curve.value(theta), run.point_shots, stream);
      const auto est = mle_single(curve, record, prior);
      if (est.sigma) {
        sigma_sum += *est.sigma;
        ++sigma_count;
      }
    }
    const double mle_sigma =
        sigma_count > 0
            ? std::sqrt(static_cast<double>(run.point_shots)) * sigma_sum /
                  sigma_count
            : std::numeric_limits<double>::infinity();
    out << num17(theta) << "," << num17(sensitivity_or_inf(ideal, theta))
        << "," << num17(sensitivity_or_inf(curve, theta)) << ","
        << num17(mle_sigma) << "\n";
  }
  out.close();
  write_config_echo(run.out_dir / "config_echo.ini", config);

  Manifest manifest("sensitivity");
  manifest.add_file(run.out_dir, csv_path);
  manifest.write(run.out_dir / "manifest.txt", timer.seconds());
  return csv_path;
}

ImageOutput run_image(const RunConfig& config) {
  Timer timer;
  const ResolvedRun run = resolve(config);
  fs::create_directories(run.out_dir);
  const PhaseField field = build_phase_field(config.width, config.height);
  const auto fit = calibrated_curve(
      run, config, RandomSource(config.seed).fork(kCalibrationSalt));
  const CalibrationCurve& curve = fit.curve;
  const double theta_min = optimal_working_point(curve);

  ImageOutput out;
  out.metrics.theta_min = theta_min;
  out.metrics.theta_dark = curve.theta_dark();

  const ScanStrategy strategy =
      make_strategy(config, run, curve, theta_min, &out.metrics.offset);
  const ScanSet set =
      scan_and_measure(field, config, strategy, curve, out.metrics.offset,
                       theta_min, run.scan_shots, kImageSalt);
  out.metrics.lsd = set.lsd;
  out.metrics.rmse_mean = set.rmse_mean;
  out.metrics.singular_pixels = set.singular;
  out.metrics.clamped_pixels = set.clamped;
  out.metrics.region = set.region;

  // classical single-photon baseline at the same photon budget, always a
  // fixed-offset scan over its own near-optimal region
  if (!run.input.is_single_photon()) {
    RunConfig ref = config;
    ref.state = "single";
    ref.visibility = -1.0;
    ref.peak_height = -1.0;
    ref.shots = run.scan_shots * run.input.total_photons();
    const ResolvedRun ref_run = resolve(ref);
    const auto ref_fit = calibrated_curve(
        ref_run, ref, RandomSource(config.seed).fork(kReferenceSalt));
    const double ref_theta_min = optimal_working_point(ref_fit.curve);
    const double ref_offset = ref_theta_min - kFieldLo;
    const ScanSet ref_set = scan_and_measure(
        field, ref, FixedOffsetStrategy{ref_offset}, ref_fit.curve, ref_offset,
        ref_theta_min, ref_run.scan_shots, kReferenceSalt + 1);
    out.metrics.lsd_reference = ref_set.lsd;
    out.metrics.enhancement_ratio = ref_set.lsd / set.lsd;
  }

  // rasters: the truth and the first estimated picture
  out.truth_pgm = run.out_dir / "truth.pgm";
  out.estimate_pgm = run.out_dir / "estimate.pgm";
  GrayImage truth = gray_from_values(field.phase, field.width, field.height,
                                     kFieldLo, kFieldHi);
  truth.comment = gray_comment(config);
  write_pgm(out.truth_pgm, truth, config.binary_pgm);
  GrayImage estimate =
      gray_from_values(set.images.front().phase, field.width, field.height,
                       kFieldLo, kFieldHi);
  estimate.comment = gray_comment(config);
  write_pgm(out.estimate_pgm, estimate, config.binary_pgm);

  out.metrics_path = run.out_dir / "metrics.csv";
  {
    std::ofstream metrics(out.metrics_path);
    metrics << "state,strategy,images,shots_per_pixel,photons_per_pixel,"
               "offset,theta_min,theta_dark,region_x0,region_y0,region_x1,"
               "region_y1,lsd,lsd_reference,enhancement_ratio,rmse_mean,"
               "singular_pixels,clamped_pixels\n";
    metrics << run.input.name() << "," << config.strategy << ","
            << config.images << "," << run.scan_shots << ","
            << run.scan_shots * run.input.total_photons() << ","
            << num17(out.metrics.offset) << "," << num17(theta_min) << ","
            << num17(curve.theta_dark()) << "," << set.region.x0 << ","
            << set.region.y0 << "," << set.region.x1 << "," << set.region.y1
            << "," << num17(set.lsd) << "," << num17(out.metrics.lsd_reference)
            << "," << num17(out.metrics.enhancement_ratio) << ","
            << num17(set.rmse_mean) << "," << set.singular << ","
            << set.clamped << "\n";
  }

  write_calibration_record(
      run.out_dir / ("calibration_" + run.input.name() + ".txt"), run, config,
      curve);
  write_config_echo(run.out_dir / "config_echo.ini", config);

  Manifest manifest("image");
  manifest.add_file(run.out_dir, out.truth_pgm);
  manifest.add_file(run.out_dir, out.estimate_pgm);
  manifest.add_file(run.out_dir, out.metrics_path);
  manifest.add_file(run.out_dir,
                    run.out_dir / ("calibration_" + run.input.name() + ".txt"));
  out.manifest_path = run.out_dir / "manifest.txt";
  manifest.write(out.manifest_path, timer.seconds());
  return out;
}

namespace {

// Fig. 4 analogue: sweep the true phase, estimate with the combined MLE and
// compare the averaged uncertainty against the total-information bound.
struct SweepRow {
  double phi = 0.0;
  double rate_base = 0.0;
  double rate_offset = 0.0;
  double mle_mean = 0.0;
  double mle_se = 0.0;
  double sigma_sqrt_shots = 0.0;
  double bound_sqrt_shots = 0.0;
};

std::vector<SweepRow> two_sequence_sweep(const CalibrationCurve& curve,
                                         std::int64_t n1, std::int64_t n2,
                                         std::int64_t reps,
                                         const RandomSource& source) {
  const double dark = curve.theta_dark();
  const double offset = -0.3 * dark;
  const PriorInterval prior{0.0, dark};
  const std::int64_t shots = n1 + n2;
  std::vector<SweepRow> rows;
  std::uint64_t stream_id = 0;
  for (int k = 1; k <= 24; ++k) {
    const double phi = dark * k / 25.0;
    SweepRow row;
    row.phi = phi;
    double est_sum = 0.0, est_sumsq = 0.0, sigma_sum = 0.0;
    for (std::int64_t r = 0; r < reps; ++r) {
      auto stream = source.stream(stream_id++);
      TwoSequenceRecord data;
      data.offset = offset;
      data.base = simulate_counts(curve.value(phi), n1, stream);
      data.offsetted = simulate_counts(curve.value(phi + offset), n2, stream);
      row.rate_base += data.base.rate();
      row.rate_offset += data.offsetted.rate();
      const auto est = mle_combined(curve, data, prior);
      est_sum += est.value;
      est_sumsq += est.value * est.value;
      sigma_sum += est.sigma.value_or(0.0);
    }
    row.rate_base /= reps;
    row.rate_offset /= reps;
    row.mle_mean = est_sum / reps;
    const double var = std::max(
        0.0, (est_sumsq - reps * row.mle_mean * row.mle_mean) / (reps - 1));
    row.mle_se = std::sqrt(var / reps);
    row.sigma_sqrt_shots = std::sqrt(static_cast<double>(shots)) *
                           (sigma_sum / reps);
    row.bound_sqrt_shots =
        std::sqrt(static_cast<double>(shots) /
                  total_fisher(curve, phi, offset, n1, n2));
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepRow>& rows,
                     double offset) {
  std::ofstream out(path);
  out << "# offset = " << num17(offset) << "\n";
  out << "phi,rate_base,rate_offset,mle_mean,mle_se,sigma_sqrt_shots,"
         "bound_sqrt_shots\n";
  for (const auto& row : rows) {
    out << num17(row.phi) << "," << num17(row.rate_base) << ","
        << num17(row.rate_offset) << "," << num17(row.mle_mean) << ","
        << num17(row.mle_se) << "," << num17(row.sigma_sqrt_shots) << ","
        << num17(row.bound_sqrt_shots) << "\n";
  }
}

}  // namespace

ReproduceOutput run_reproduce_all(const RunConfig& config) {
  Timer timer;
  const fs::path root(config.out);
  fs::create_directories(root);
  ReproduceOutput result;
  auto& checks = result.checks;

  const char* states[] = {"single", "tf1", "tf2", "tf3"};
  const double lsd_targets[] = {0.0413, 0.0297, 0.0253, 0.022};

  // calibrations and sensitivity curves for every state
  std::vector<CalibrationCurve> curves;
  for (const char* state : states) {
    RunConfig sub = config;
    sub.state = state;
    sub.out = (root / "calibration" / state).string();
    const auto cal = run_calibrate(sub);
    curves.push_back(cal.curve);

    const ImperfectionParams expected = table_imperfections(cal.curve.input());
    const bool a_ok = std::abs(cal.curve.scale() - expected.scale()) < 1e-2;
    const bool b_ok = std::abs(cal.curve.offset() - expected.floor()) < 1e-2;
    append_summary(checks, std::string("calibration_") + state, a_ok && b_ok,
                   cal.curve.scale(),
                   "a within 0.01 of " + num17(expected.scale()));

    sub.out = (root / "sensitivity" / state).string();
    run_sensitivity(sub);

    // the fitted sensitivity blows past 10x shot noise approaching the fringe
    const double dark = cal.curve.theta_dark();
    double worst = 0.0;
    for (double theta : linspace(dark - 0.02, dark - 1e-5, 200)) {
      worst = std::max(worst, sensitivity_or_inf(cal.curve, theta));
    }
    const double limit =
        10.0 * shot_noise_limit(cal.curve.input().total_photons());
    append_summary(checks, std::string("singularity_") + state, worst > limit,
                   worst, "> " + num17(limit));
  }

  // fixed-offset images for every state, with the quantum-enhancement ratios
  double fixed_rmse_tf3 = 0.0;
  for (int s = 0; s < 4; ++s) {
    RunConfig sub = config;
    sub.state = states[s];
    sub.strategy = "fixed";
    sub.out = (root / "images_fixed" / states[s]).string();
    const auto image = run_image(sub);
    if (s == 3) fixed_rmse_tf3 = image.metrics.rmse_mean;
    append_summary(checks, std::string("lsd_") + states[s],
                   within(image.metrics.lsd, lsd_targets[s], 0.20),
                   image.metrics.lsd,
                   num17(lsd_targets[s]) + " within 20%");
    if (s > 0) {
      const int photons = 2 * s;
      const double expected = std::sqrt((photons + 2.0) / 2.0);
      append_summary(checks, std::string("enhancement_") + states[s],
                     within(image.metrics.enhancement_ratio, expected, 0.15),
                     image.metrics.enhancement_ratio,
                     num17(expected) + " within 15%");
    }
    if (s == 3) {
      append_summary(checks, "speckles_fixed_tf3",
                     image.metrics.singular_pixels > 0,
                     image.metrics.singular_pixels, "> 0 singular pixels");
    }
  }

  // phase locking heals the six-photon image
  {
    RunConfig sub = config;
    sub.state = "tf3";
    sub.strategy = "lock";
    sub.out = (root / "images_lock" / "tf3").string();
    const auto locked = run_image(sub);
    append_summary(checks, "lock_tf3_rmse",
                   within(locked.metrics.rmse_mean, 0.022, 0.30),
                   locked.metrics.rmse_mean, "0.022 within 30%");
    append_summary(checks, "lock_beats_fixed",
                   locked.metrics.rmse_mean < fixed_rmse_tf3,
                   locked.metrics.rmse_mean,
                   "< " + num17(fixed_rmse_tf3) + " (fixed offset)");
    append_summary(checks, "lock_zero_flagged",
                   locked.metrics.singular_pixels == 0,
                   locked.metrics.singular_pixels, "0 singular pixels");
  }

  // the two-sequence scheme removes the singularity for every probe
  for (int s = 1; s < 4; ++s) {
    RunConfig sub = config;
    sub.state = states[s];
    sub.strategy = "two-seq";
    sub.out = (root / "images_twoseq" / states[s]).string();
    const auto image = run_image(sub);
    append_summary(checks, std::string("twoseq_flags_") + states[s],
                   image.metrics.singular_pixels == 0,
                   image.metrics.singular_pixels, "0 singular pixels");

    const double dark = curves[s].theta_dark();
    double floor = 1e300;
    for (double phi : linspace(0.0, dark, 501)) {
      floor = std::min(floor,
                       total_fisher(curves[s], phi, -0.3 * dark, 1, 1) / 2.0);
    }
    append_summary(checks, std::string("twoseq_floor_") + states[s],
                   floor > 0.5, floor, "> 0.5 per measurement");
  }

  // Fig. 4 sweep for the six-photon probe: unbiased estimates whose
  // averaged uncertainty follows the total-information bound
  {
    const CalibrationCurve& curve = curves[3];
    const std::int64_t shots = 1200 / curve.input().total_photons();
    const auto rows = two_sequence_sweep(
        curve, shots / 2, shots - shots / 2, config.reps,
        RandomSource(config.seed).fork(kSweepSalt));
    write_sweep_csv(root / "twoseq_mle_tf3.csv", rows,
                    -0.3 * curve.theta_dark());
    bool unbiased = true;
    double worst_deviation = 0.0;
    const double dark = curve.theta_dark();
    for (const auto& row : rows) {
      if (std::abs(row.mle_mean - row.phi) > 3.0 * row.mle_se) {
        unbiased = false;
      }
      if (row.phi > 0.2 * dark && row.phi < 0.8 * dark) {
        worst_deviation = std::max(
            worst_deviation,
            std::abs(row.sigma_sqrt_shots / row.bound_sqrt_shots - 1.0));
      }
    }
    append_summary(checks, "twoseq_mle_unbiased", unbiased, 0.0,
                   "mean within 3 standard errors at every phase");
    append_summary(checks, "twoseq_sigma_bound", worst_deviation < 0.30,
                   worst_deviation, "sigma/bound within 30% (central 60%)");
  }

  // summary table
  result.summary_path = root / "summary.csv";
  {
    std::ofstream csv(result.summary_path);
    std::ofstream txt(root / "summary.txt");
    csv << "check,pass,value,target\n";
    result.all_passed = true;
    for (const auto& check : checks) {
      result.all_passed &= check.pass;
      csv << check.name << "," << (check.pass ? "pass" : "fail") << ","
          << num17(check.value) << ",\"" << check.target << "\"\n";
      txt << (check.pass ? "PASS " : "FAIL ") << check.name
          << "  value=" << num17(check.value) << "  target=" << check.target
          << "\n";
    }
  }
  write_config_echo(root / "config_echo.ini", config);

  // one manifest over every data file of the whole matrix
  Manifest manifest("reproduce-all");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name == "manifest.txt" || name == "config_echo.ini") continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) manifest.add_file(root, file);
  result.manifest_path = root / "manifest.txt";
  manifest.write(result.manifest_path, timer.seconds());
  return result;
}

}  // namespace fockscope::cli
