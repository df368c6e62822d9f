#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "streaklite/dataset.hpp"
#include "streaklite/features.hpp"

namespace streaklite {

inline constexpr std::string_view kModelMagic = "STREAKLITE-LSVC v1";

/// Linear decision function f(x) = w.x + b with a decision threshold.
/// After training, scores are rescaled so that the median background row
/// scores 0 and the median target row scores 1.
struct LinearModel {
  std::array<double, kFeatureCount> weights{};
  double bias = 0.0;
  double threshold = 0.5;
  std::string feature_order_tag{kFeatureOrderTag};

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

/// Pegasos stochastic sub-gradient settings for the L2-regularized hinge
/// loss, lambda = 1 / (C n).
struct TrainConfig {
  double c = 0.01;
  int epochs = 20;
  std::uint64_t seed = 1;
  /// Iterates from this fraction of training onward are averaged.
  double average_from = 0.5;
  double threshold = 0.5;
};

double decision_value(const LinearModel& model, const FeatureVector& x) noexcept;
int predict(const LinearModel& model, const FeatureVector& x) noexcept;

/// Throws std::invalid_argument on fewer than 1000 rows, a single class or
/// non-finite features.
LinearModel train(std::span<const TrainingRow> rows, const TrainConfig& config);

double accuracy(const LinearModel& model, std::span<const TrainingRow> rows);

struct KFoldReport {
  std::vector<double> accuracies;  // percent, one per fold
  double mean = 0.0;               // percent
};

/// Stratified k-fold cross-validation; folds are drawn with config.seed.
KFoldReport kfold_validate(std::span<const TrainingRow> rows, int k, const TrainConfig& config);

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

/// ROC sweep over every distinct decision value, from (+inf, 0, 0) to
/// (-inf, 1, 1). A row is predicted positive when its score >= threshold.
std::vector<RocPoint> roc_curve(const LinearModel& model, std::span<const TrainingRow> rows);
double roc_auc(std::span<const RocPoint> curve) noexcept;

/// Rates at the model's own threshold.
struct OperatingPoint {
  double fpr;
  double tpr;
};
OperatingPoint operating_point(const LinearModel& model, std::span<const TrainingRow> rows);

void save_model(const LinearModel& model, const std::filesystem::path& path);
/// Throws IoError on a wrong magic line, tag mismatch or malformed numbers.
LinearModel load_model(const std::filesystem::path& path);

/// w1..w25 as a 5x5 grid (tile layout), one CSV row per tile row.
void write_weight_heatmap(const LinearModel& model, const std::filesystem::path& path,
                          const std::vector<std::string>& comment = {});

}  // namespace streaklite
