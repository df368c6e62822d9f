#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "streaklite/classifier.hpp"
#include "streaklite/csv.hpp"
#include "streaklite/error.hpp"
#include "streaklite/rng.hpp"
#include "support.hpp"

using namespace streaklite;
using streaklite::testing::read_file;
using streaklite::testing::small_model;
using streaklite::testing::TempDir;

namespace {

// Two tight clusters at (0,0) and (10,10) in the first two coordinates.
std::vector<TrainingRow> toy_rows(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TrainingRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    rows[i].label = label;
    rows[i].x[0] = 10.0 * label + rng.uniform(-0.1, 0.1);
    rows[i].x[1] = 10.0 * label + rng.uniform(-0.1, 0.1);
  }
  return rows;
}

const std::vector<TrainingRow>& recipe_rows() {
  static const std::vector<TrainingRow> rows = [] {
    DatasetConfig cfg;
    cfg.keep_samples = false;
    return generate_dataset_rows(130000, cfg, 7).rows;
  }();
  return rows;
}

FeatureVector random_vector(Rng& rng) {
  FeatureVector x;
  for (double& v : x) v = rng.uniform(0.0, 40.0);
  return x;
}

}  // namespace

TEST(Train, SeparableToySet) {
  const auto rows = toy_rows(2000, 1);
  const LinearModel m = train(rows, {});
  EXPECT_EQ(accuracy(m, rows), 1.0);
}

TEST(Train, RejectsBadInput) {
  auto rows = toy_rows(2000, 2);
  EXPECT_THROW(train(std::span(rows).first(999), {}), std::invalid_argument);
  for (auto& r : rows) r.label = 1;
  EXPECT_THROW(train(rows, {}), std::invalid_argument);
  rows = toy_rows(2000, 2);
  rows[10].x[3] = std::nan("");
  EXPECT_THROW(train(rows, {}), std::invalid_argument);
  rows = toy_rows(2000, 2);
  TrainConfig bad;
  bad.c = 0.0;
  EXPECT_THROW(train(rows, bad), std::invalid_argument);
  bad = {};
  bad.epochs = 0;
  EXPECT_THROW(train(rows, bad), std::invalid_argument);
}

TEST(Train, CalibratedClassMedians) {
  const auto rows = toy_rows(2000, 3);
  const LinearModel m = train(rows, {});
  std::vector<double> neg, pos;
  for (const auto& r : rows) (r.label ? pos : neg).push_back(decision_value(m, r.x));
  auto med = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };
  EXPECT_NEAR(med(neg), 0.0, 1e-9);
  EXPECT_NEAR(med(pos), 1.0, 1e-9);
}

TEST(Train, DeterministicBytes) {
  TempDir dir("model");
  const auto rows = toy_rows(3000, 4);
  save_model(train(rows, {}), dir / "a.model");
  save_model(train(rows, {}), dir / "b.model");
  EXPECT_EQ(read_file(dir / "a.model"), read_file(dir / "b.model"));
}

TEST(DecisionValue, ZeroVectorGivesBias) {
  const LinearModel& m = small_model();
  EXPECT_EQ(decision_value(m, FeatureVector{}), m.bias);
}

TEST(DecisionValue, Linear) {
  const LinearModel& m = small_model();
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const FeatureVector x = random_vector(rng);
    FeatureVector x2 = x;
    for (double& v : x2) v *= 2.0;
    EXPECT_NEAR(decision_value(m, x2) - m.bias, 2.0 * (decision_value(m, x) - m.bias), 1e-9);
  }
}

TEST(Predict, ThresholdRule) {
  LinearModel m;
  m.weights[0] = 1.0;
  m.threshold = 0.5;
  FeatureVector x{};
  x[0] = 0.5;
  EXPECT_EQ(predict(m, x), 1);
  x[0] = 0.4999;
  EXPECT_EQ(predict(m, x), 0);
  EXPECT_EQ(predict(m, FeatureVector{}), 0);
  m.bias = 0.7;
  EXPECT_EQ(predict(m, FeatureVector{}), 1);
}

TEST(Predict, RaisingThresholdNeverAddsPositives) {
  LinearModel m = small_model();
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const FeatureVector x = random_vector(rng);
    m.threshold = 0.5;
    const int lo = predict(m, x);
    m.threshold = 0.9;
    EXPECT_LE(predict(m, x), lo);
  }
}

TEST(KFold, DuplicateRowsGiveIdenticalFolds) {
  std::vector<TrainingRow> rows(2000);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].label = static_cast<int>(i % 2);
    rows[i].x[12] = rows[i].label ? 5.0 : 1.0;
  }
  const KFoldReport r = kfold_validate(rows, 5, {});
  ASSERT_EQ(r.accuracies.size(), 5u);
  for (double a : r.accuracies) EXPECT_EQ(a, r.accuracies[0]);
  EXPECT_EQ(r.mean, r.accuracies[0]);
}

TEST(KFold, RejectsBadK) {
  const auto rows = toy_rows(2000, 5);
  EXPECT_THROW(kfold_validate(rows, 1, {}), std::invalid_argument);
  EXPECT_THROW(kfold_validate(std::span(rows).first(3), 5, {}), std::invalid_argument);
}

TEST(KFold, RecipeFoldsAgree) {
  // Reference folds spread by about two points.
  const KFoldReport r = kfold_validate(recipe_rows(), 5, {});
  const auto [lo, hi] = std::minmax_element(r.accuracies.begin(), r.accuracies.end());
  EXPECT_LE(*hi - *lo, 2.1);
}

TEST(Weights, CentralTileDominates) {
  const LinearModel m = train(recipe_rows(), {});
  std::vector<std::pair<double, int>> order;
  for (int i = 0; i < kFeatureCount; ++i) order.push_back({m.weights[i], i});
  std::sort(order.rbegin(), order.rend());
  EXPECT_EQ(order[0].second, kCenterTile);
}

TEST(Weights, CenterMaxIsSecondLargest) {
  // Stronger form of the property above: the central maximum is the other
  // dominant positive weight.
  const LinearModel m = train(recipe_rows(), {});
  std::vector<std::pair<double, int>> order;
  for (int i = 0; i < kFeatureCount; ++i) order.push_back({std::abs(m.weights[i]), i});
  std::sort(order.rbegin(), order.rend());
  const bool top_two = (order[0].second == kCenterTile && order[1].second == kCenterMax) ||
                       (order[0].second == kCenterMax && order[1].second == kCenterTile);
  EXPECT_TRUE(top_two) << "w26 = " << m.weights[kCenterMax];
  EXPECT_GT(m.weights[kCenterMax], 0.0);
}

TEST(Weights, MagnitudeDecaysAwayFromCenter) {
  const LinearModel m = train(recipe_rows(), {});
  double ring[3] = {0, 0, 0};
  int count[3] = {0, 0, 0};
  for (int t = 0; t < kTileCount; ++t) {
    const int r = std::max(std::abs(t % 5 - 2), std::abs(t / 5 - 2));
    ring[r] += std::abs(m.weights[t]);
    ++count[r];
  }
  EXPECT_GT(ring[0] / count[0], ring[1] / count[1]);
  EXPECT_GT(ring[1] / count[1], ring[2] / count[2]);
}

TEST(Roc, PerfectSeparatorHasUnitArea) {
  const auto rows = toy_rows(2000, 9);
  const LinearModel m = train(rows, {});
  const auto curve = roc_curve(m, rows);
  EXPECT_DOUBLE_EQ(roc_auc(curve), 1.0);
  EXPECT_EQ(curve.front().fpr, 0.0);
  EXPECT_EQ(curve.back().tpr, 1.0);
}

TEST(Roc, RandomLabelsAtChance) {
  Rng rng(10);
  std::vector<TrainingRow> rows(10000);
  for (auto& r : rows) {
    r.x = random_vector(rng);
    r.label = static_cast<int>(rng.below(2));
  }
  const auto curve = roc_curve(small_model(), rows);
  EXPECT_NEAR(roc_auc(curve), 0.5, 0.05);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_GE(curve[i].fpr, curve[i - 1].fpr);
    EXPECT_GE(curve[i].tpr, curve[i - 1].tpr);
  }
}

TEST(Roc, SingleClassRejected) {
  auto rows = toy_rows(100, 11);
  for (auto& r : rows) r.label = 0;
  EXPECT_THROW(roc_curve(small_model(), rows), std::invalid_argument);
}

TEST(Roc, OperatingPointMatchesCurve) {
  const auto rows = toy_rows(1000, 12);
  LinearModel m = train(rows, {});
  m.threshold = 0.5;
  const OperatingPoint op = operating_point(m, rows);
  // Brute-force count at the model threshold.
  double fp = 0, tp = 0, n = 0, p = 0;
  for (const auto& r : rows) {
    const bool pos = decision_value(m, r.x) >= 0.5;
    (r.label ? p : n) += 1;
    if (pos) (r.label ? tp : fp) += 1;
  }
  EXPECT_DOUBLE_EQ(op.fpr, fp / n);
  EXPECT_DOUBLE_EQ(op.tpr, tp / p);
}

TEST(ModelFile, RoundTrip) {
  TempDir dir("model");
  const LinearModel& m = small_model();
  save_model(m, dir / "m.model");
  const LinearModel back = load_model(dir / "m.model");
  EXPECT_EQ(back, m);
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const FeatureVector x = random_vector(rng);
    EXPECT_EQ(decision_value(back, x), decision_value(m, x));
  }
}

TEST(ModelFile, Layout) {
  TempDir dir("model");
  save_model(small_model(), dir / "m.model");
  std::ifstream in(dir / "m.model");
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 30u);
  EXPECT_EQ(lines[0], kModelMagic);
  EXPECT_EQ(lines[1], kFeatureOrderTag);
  EXPECT_EQ(parse_double(lines[2]), 0.5);
}

TEST(ModelFile, RejectsWrongMagicAndTag) {
  TempDir dir("model");
  save_model(small_model(), dir / "m.model");
  std::string text = read_file(dir / "m.model");
  {
    std::ofstream out(dir / "bad.model");
    out << "STREAKLITE-LSVC v0" << text.substr(text.find('\n'));
  }
  EXPECT_THROW(load_model(dir / "bad.model"), IoError);
  {
    std::ofstream out(dir / "tag.model");
    const auto first = text.find('\n');
    const auto second = text.find('\n', first + 1);
    out << text.substr(0, first + 1) << "column-major" << text.substr(second);
  }
  EXPECT_THROW(load_model(dir / "tag.model"), IoError);
  EXPECT_THROW(load_model(dir / "missing.model"), IoError);
}

TEST(ModelFile, HeatmapIsFiveByFive) {
  TempDir dir("model");
  write_weight_heatmap(small_model(), dir / "w.csv", {"note"});
  std::ifstream in(dir / "w.csv");
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "# note");
  EXPECT_EQ(lines[1], "c1,c2,c3,c4,c5");
  const auto middle = split_csv_line(lines[4]);
  ASSERT_EQ(middle.size(), 5u);
  EXPECT_EQ(parse_double(middle[2]), small_model().weights[kCenterTile]);
}
