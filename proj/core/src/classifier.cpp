#include "streaklite/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "streaklite/csv.hpp"
#include "streaklite/error.hpp"
#include "streaklite/rng.hpp"

namespace streaklite {

namespace {

constexpr int kAugmented = kFeatureCount + 1;  // constant 1 carries the bias
using Weights = std::array<double, kAugmented>;

double raw_score(const Weights& w, const FeatureVector& x) noexcept {
  double s = 0.0;
  for (int i = 0; i < kFeatureCount; ++i) s += w[i] * x[i];
  return s + w[kFeatureCount];
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

void check_rows(std::span<const TrainingRow> rows) {
  if (rows.size() < 1000) throw std::invalid_argument("training needs at least 1000 rows");
  std::size_t positives = 0;
  for (const auto& r : rows) {
    for (double v : r.x)
      if (!std::isfinite(v)) throw std::invalid_argument("training rows contain non-finite features");
    if (r.label != 0 && r.label != 1) throw std::invalid_argument("labels must be 0 or 1");
    positives += static_cast<std::size_t>(r.label);
  }
  if (positives == 0 || positives == rows.size()) {
    throw std::invalid_argument("training rows contain a single class");
  }
}

}  // namespace

double decision_value(const LinearModel& model, const FeatureVector& x) noexcept {
  double s = 0.0;
  for (int i = 0; i < kFeatureCount; ++i) s += model.weights[i] * x[i];
  return s + model.bias;
}

int predict(const LinearModel& model, const FeatureVector& x) noexcept {
  return decision_value(model, x) >= model.threshold ? 1 : 0;
}

LinearModel train(std::span<const TrainingRow> rows, const TrainConfig& config) {
  if (!(config.c > 0.0)) throw std::invalid_argument("regularization C must be positive");
  if (config.epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  check_rows(rows);

  const std::size_t n = rows.size();
  const double lambda = 1.0 / (config.c * static_cast<double>(n));
  const double radius = 1.0 / std::sqrt(lambda);
  const std::uint64_t total = static_cast<std::uint64_t>(config.epochs) * n;
  const auto average_start =
      static_cast<std::uint64_t>(std::floor(std::clamp(config.average_from, 0.0, 1.0) * static_cast<double>(total)));

  Weights w{};
  Weights avg{};
  std::uint64_t averaged = 0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t idx : order) {
      ++t;
      const TrainingRow& row = rows[idx];
      const double y = row.label == 1 ? 1.0 : -1.0;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double margin = y * raw_score(w, row.x);
      const double shrink = 1.0 - eta * lambda;
      for (double& v : w) v *= shrink;
      if (margin < 1.0) {
        for (int k = 0; k < kFeatureCount; ++k) w[k] += eta * y * row.x[k];
        w[kFeatureCount] += eta * y;
      }
      double norm2 = 0.0;
      for (double v : w) norm2 += v * v;
      if (norm2 > radius * radius) {
        const double f = radius / std::sqrt(norm2);
        for (double& v : w) v *= f;
      }
      if (t > average_start) {
        ++averaged;
        for (int k = 0; k < kAugmented; ++k) avg[k] += (w[k] - avg[k]) / static_cast<double>(averaged);
      }
    }
  }

  std::vector<double> neg_scores;
  std::vector<double> pos_scores;
  for (const auto& r : rows) (r.label == 1 ? pos_scores : neg_scores).push_back(raw_score(avg, r.x));
  const double med0 = median(std::move(neg_scores));
  const double med1 = median(std::move(pos_scores));
  if (!(med1 > med0)) {
    throw InvariantError("trained scores do not separate the class medians; cannot calibrate the threshold");
  }
  const double scale = 1.0 / (med1 - med0);

  LinearModel model;
  for (int k = 0; k < kFeatureCount; ++k) model.weights[k] = avg[k] * scale;
  model.bias = (avg[kFeatureCount] - med0) * scale;
  model.threshold = config.threshold;
  return model;
}

double accuracy(const LinearModel& model, std::span<const TrainingRow> rows) {
  if (rows.empty()) throw std::invalid_argument("accuracy of an empty row set");
  std::size_t correct = 0;
  for (const auto& r : rows) correct += predict(model, r.x) == r.label ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

KFoldReport kfold_validate(std::span<const TrainingRow> rows, int k, const TrainConfig& config) {
  if (k < 2) throw std::invalid_argument("k-fold needs k >= 2");
  if (rows.size() < static_cast<std::size_t>(k)) throw std::invalid_argument("fewer rows than folds");

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < rows.size(); ++i) by_class[rows[i].label == 1 ? 1 : 0].push_back(i);
  Rng rng(split_seed(config.seed, 0xf01d));
  std::vector<int> fold(rows.size());
  for (auto& members : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng.below(i)]);
    for (std::size_t j = 0; j < members.size(); ++j) fold[members[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
  }

  KFoldReport report;
  for (int f = 0; f < k; ++f) {
    std::vector<TrainingRow> train_rows;
    std::vector<TrainingRow> test_rows;
    for (std::size_t i = 0; i < rows.size(); ++i) (fold[i] == f ? test_rows : train_rows).push_back(rows[i]);
    const LinearModel model = train(train_rows, config);
    report.accuracies.push_back(100.0 * accuracy(model, test_rows));
  }
  report.mean = std::accumulate(report.accuracies.begin(), report.accuracies.end(), 0.0) / k;
  return report;
}

std::vector<RocPoint> roc_curve(const LinearModel& model, std::span<const TrainingRow> rows) {
  std::vector<std::pair<double, int>> scored;
  scored.reserve(rows.size());
  std::size_t positives = 0;
  for (const auto& r : rows) {
    scored.emplace_back(decision_value(model, r.x), r.label);
    positives += r.label == 1 ? 1 : 0;
  }
  const std::size_t negatives = rows.size() - positives;
  if (positives == 0 || negatives == 0) throw std::invalid_argument("ROC needs both classes");
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<RocPoint> curve;
  curve.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < scored.size();) {
    const double threshold = scored[i].first;
    while (i < scored.size() && scored[i].first == threshold) {
      (scored[i].second == 1 ? tp : fp) += 1;
      ++i;
    }
    curve.push_back({threshold, static_cast<double>(fp) / negatives, static_cast<double>(tp) / positives});
  }
  curve.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
  return curve;
}

double roc_auc(std::span<const RocPoint> curve) noexcept {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * 0.5 * (curve[i].tpr + curve[i - 1].tpr);
  }
  return area;
}

OperatingPoint operating_point(const LinearModel& model, std::span<const TrainingRow> rows) {
  std::size_t tp = 0, fp = 0, p = 0, n = 0;
  for (const auto& r : rows) {
    const int y = predict(model, r.x);
    if (r.label == 1) {
      ++p;
      tp += static_cast<std::size_t>(y);
    } else {
      ++n;
      fp += static_cast<std::size_t>(y);
    }
  }
  if (p == 0 || n == 0) throw std::invalid_argument("operating point needs both classes");
  return {static_cast<double>(fp) / n, static_cast<double>(tp) / p};
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kModelMagic << '\n' << model.feature_order_tag << '\n' << format_double(model.threshold) << '\n';
  for (double w : model.weights) out << format_double(w) << '\n';
  out << format_double(model.bias) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model " + path.string());
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw IoError("model " + path.string() + " ends before " + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  if (next_line("magic") != kModelMagic) throw IoError("model " + path.string() + " has the wrong magic line");
  LinearModel model;
  model.feature_order_tag = next_line("feature order tag");
  if (model.feature_order_tag != kFeatureOrderTag) {
    throw IoError("model " + path.string() + " uses feature order '" + model.feature_order_tag + "', expected '" +
                  std::string(kFeatureOrderTag) + "'");
  }
  model.threshold = parse_double(next_line("threshold"));
  for (double& w : model.weights) w = parse_double(next_line("weights"));
  model.bias = parse_double(next_line("bias"));
  return model;
}

void write_weight_heatmap(const LinearModel& model, const std::filesystem::path& path,
                          const std::vector<std::string>& comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& c : comment) out << "# " << c << '\n';
  out << "c1,c2,c3,c4,c5\n";
  for (int r = 0; r < kTilesPerSide; ++r) {
    for (int c = 0; c < kTilesPerSide; ++c) {
      out << format_double(model.weights[r * kTilesPerSide + c]) << (c + 1 < kTilesPerSide ? ',' : '\n');
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace streaklite
