#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "streaklite/features.hpp"
#include "streaklite/frame.hpp"
#include "streaklite/streak.hpp"

namespace streaklite {

/// One simulated frame together with its ground truth.
struct LabeledSample {
  Frame frame;           // noisy frame
  Frame clean;           // noise-free background + streak
  BinaryMap ideal_mask;
  StreakParams streak;
  double psnr = 0.0;     // peak of the clean frame against the noisy frame's background estimate
  std::uint64_t seed = 0;
};

/// Feature row with provenance back to the generating frame.
struct TrainingRow {
  FeatureVector x{};
  int label = 0;
  int frame_index = -1;
  int px = -1;
  int py = -1;
};

/// Training-set recipe: random straight streaks on Gaussian noise,
/// labels from the thresholded noiseless frame, background rows biased
/// toward the band surrounding each streak.
struct DatasetConfig {
  int frame_width = 128;
  int frame_height = 128;
  double noise_mu = 30.0;
  double noise_sigma = 8.0;
  double psnr_target = 2.0;
  double angle_min = 0.0;
  double angle_max = 180.0;
  double length_min = 10.0;
  double length_max = 22.0;
  double psf_sigma = kDefaultPsfSigma;
  double mask_threshold = 4.0;
  /// Fraction of rows labeled background.
  double background_share = 0.6;
  /// Fraction of background rows drawn from the edge band.
  double edge_share = 0.5;
  /// Chebyshev radius of the edge band around the ideal mask.
  int edge_radius = 1;
  /// Keep the frames in Dataset::samples (rows are always kept).
  bool keep_samples = true;

  /// Throws std::invalid_argument on empty or inverted ranges.
  void validate() const;
};

struct Dataset {
  std::vector<LabeledSample> samples;
  std::vector<TrainingRow> rows;
};

/// Simulates one frame from its sub-seed. Placements whose streak would
/// leave the frame are redrawn.
LabeledSample simulate_sample(const DatasetConfig& config, std::uint64_t sample_seed);

/// Rows for one simulated frame.
std::vector<TrainingRow> sample_rows(const LabeledSample& sample, const DatasetConfig& config, int frame_index);

/// n_frames frames; frame i uses split_seed(seed, i).
Dataset generate_dataset(int n_frames, const DatasetConfig& config, std::uint64_t seed);

/// Keeps adding frames until at least `min_rows` rows exist.
Dataset generate_dataset_rows(std::size_t min_rows, const DatasetConfig& config, std::uint64_t seed);

/// CSV with columns x1..x26,label, preceded by `comment` lines (each
/// written as "# ...").
void write_rows_csv(const std::vector<TrainingRow>& rows, const std::filesystem::path& path,
                    const std::vector<std::string>& comment = {});
std::vector<TrainingRow> read_rows_csv(const std::filesystem::path& path);

}  // namespace streaklite
