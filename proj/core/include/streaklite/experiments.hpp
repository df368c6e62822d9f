#pragma once

// Monte-Carlo sweep and timing drivers. Every trial is a fresh simulated
// frame with one streak; trial t of grid point g uses
// split_seed(split_seed(seed, g), t), so results do not depend on the
// thread count.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streaklite/baseline.hpp"
#include "streaklite/classifier.hpp"
#include "streaklite/dataset.hpp"
#include "streaklite/growth.hpp"

namespace streaklite {

enum class Method { crude, grown, baseline };
enum class SweepKind { psnr, length, noise_sigma };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(SweepKind k) noexcept;
/// Throws std::invalid_argument on unknown names.
Method parse_method(std::string_view name);
SweepKind parse_sweep_kind(std::string_view name);

struct MetricRow {
  int grid_index = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double psnr = 0.0;
  double measured_psnr = 0.0;
  double length = 0.0;
  double noise_sigma = 0.0;
  Method method = Method::crude;
  /// Distance from the centroid of the best-matching component to the true
  /// streak centre; NaN when nothing was detected.
  double centroid_error = 0.0;
  /// IoU of the union of all output components with the ideal mask.
  double iou = 0.0;
  /// Some output component overlaps the ideal mask with IoU >= 0.3.
  bool detected = false;
  int components = 0;
  double runtime = 0.0;
};

inline constexpr double kDetectionIou = 0.3;

/// One simulated trial frame.
struct TrialSpec {
  int width = 64;
  int height = 64;
  double psnr = 2.0;
  double length = 16.0;
  double noise_mu = 30.0;
  double noise_sigma = 8.0;
  double psf_sigma = kDefaultPsfSigma;
  /// Fixed axis angle in degrees; drawn from U(0, 180) when empty.
  std::optional<double> angle_deg;
};

/// Streak centred at a random position that keeps the whole streak at least
/// two pixels inside the classifiable interior. Throws std::invalid_argument
/// when the frame is too small for that.
LabeledSample make_trial(const TrialSpec& spec, std::uint64_t seed);

struct PipelineConfig {
  int min_size = kDefaultMinComponentSize;
  GrowthConfig growth;
  BaselineConfig baseline;
};

/// Metric rows for the requested methods on one trial. The crude stage is
/// shared between the crude and grown rows.
std::vector<MetricRow> evaluate_trial(const LabeledSample& trial, const std::vector<Method>& methods,
                                      const LinearModel& model, const DirectionalBank* bank,
                                      const PipelineConfig& config);

struct SweepConfig {
  SweepKind kind = SweepKind::psnr;
  std::vector<double> grid;
  int trials = 200;
  std::vector<Method> methods{Method::crude, Method::grown};
  TrialSpec base;
  PipelineConfig pipeline;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Rows ordered by grid point, trial and then method. Throws
/// std::invalid_argument on an empty grid, no methods or trials < 1, and
/// when the baseline is requested without a bank.
std::vector<MetricRow> run_sweep(const SweepConfig& config, const LinearModel& model,
                                 const DirectionalBank* bank = nullptr);

struct SweepSummary {
  double value = 0.0;
  Method method = Method::crude;
  int trials = 0;
  double detection_rate = 0.0;
  /// Mean over detected trials; NaN when there are none.
  double mean_centroid_error = 0.0;
  double mean_iou = 0.0;
  double mean_runtime = 0.0;
};

/// One summary per (grid point, method) in first-seen order.
std::vector<SweepSummary> summarize(const std::vector<MetricRow>& rows, SweepKind kind);

void write_metric_rows_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path,
                           const std::vector<std::string>& comment = {});
void write_summary_csv(const std::vector<SweepSummary>& summary, SweepKind kind, const std::filesystem::path& path,
                       const std::vector<std::string>& comment = {});

struct BenchmarkConfig {
  int width = 1280;
  int height = 960;
  int repetitions = 150;
  int warmup = 1;
  double psnr = 3.0;
  double length = 20.0;
  int streaks = 4;
  /// Distinct frames cycled through the repetitions.
  int frames = 3;
  std::uint64_t seed = 1;
  PipelineConfig pipeline;
};

struct BenchmarkReport {
  int width = 0;
  int height = 0;
  int repetitions = 0;
  /// Mean wall-clock seconds per frame; NaN for methods not run.
  double proposed_seconds = 0.0;
  double baseline_seconds = 0.0;
  /// proposed / baseline.
  double ratio = 0.0;
};

/// Frame with `streaks` streaks at random positions on Gaussian noise.
Frame benchmark_frame(const BenchmarkConfig& config, std::uint64_t seed);

/// Single-threaded wall-clock means with `warmup` untimed runs first. The
/// proposed pipeline is crude classification plus growth. Throws
/// std::invalid_argument for repetitions < 1. Passing no bank skips the
/// baseline.
BenchmarkReport benchmark(const BenchmarkConfig& config, const LinearModel& model, const DirectionalBank* bank);

}  // namespace streaklite
