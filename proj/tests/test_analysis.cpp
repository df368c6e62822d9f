#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>

#include "streaklite/analysis.hpp"
#include "streaklite/rng.hpp"
#include "support.hpp"

using namespace streaklite;
using streaklite::testing::TempDir;

namespace {

struct SampleMoments {
  double mean;
  double std;
};

SampleMoments moments(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

AnalysisParams all_background() {
  AnalysisParams p;
  p.layers = {Gaussian{40, 8}, Gaussian{50, 8}, Gaussian{40, 8}};
  p.occupancy = {0, 0, 0};
  return p;
}

}  // namespace

TEST(Occupancy, HorizontalStreakFillsThreeRows) {
  const auto c = occupancy_for_angle(0.0);
  EXPECT_EQ(c[0], 5);
  EXPECT_EQ(c[1], 5);
  EXPECT_EQ(c[2], 5);
}

TEST(Occupancy, ThirtyDegreesWithinSubregion) {
  const auto c = occupancy_for_angle(30.0);
  EXPECT_LE(c[0] + c[1] + c[2], 25);
  EXPECT_GE(c[1], 5);
  EXPECT_EQ(c[0], c[2]);  // point symmetry about the tile center
}

TEST(Subregion, AllBackground) {
  const auto d = subregion_distributions(all_background());
  EXPECT_DOUBLE_EQ(d.target.mu, 30.0);
  EXPECT_DOUBLE_EQ(d.target.sigma, 8.0 / 5.0);
  EXPECT_DOUBLE_EQ(d.background.sigma, 8.0 / 5.0);
}

TEST(Subregion, MatchesMonteCarloAtThirtyDegrees) {
  const AnalysisParams p = AnalysisParams::from_psnr(2.0, 30.0);
  const auto d = subregion_distributions(p);
  // Independent simulation of the 25 pixels of the target sub-region.
  Rng rng(5);
  const std::size_t n = 100000;
  std::vector<double> means(n);
  for (auto& m : means) {
    double s = 0.0;
    for (int i = 0; i < p.background_count(); ++i) s += rng.normal(p.noise.mu, p.noise.sigma);
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < p.occupancy[l]; ++i) s += rng.normal(p.layers[l].mu, p.layers[l].sigma);
    m = s / 25.0;
  }
  const SampleMoments mc = moments(means);
  const double se_mean = d.target.sigma / std::sqrt(static_cast<double>(n));
  const double se_std = d.target.sigma / std::sqrt(2.0 * static_cast<double>(n));
  EXPECT_NEAR(mc.mean, d.target.mu, 3.0 * se_mean);
  EXPECT_NEAR(mc.std, d.target.sigma, 3.0 * se_std);
}

TEST(Subregion, AveragingShrinksSpread) {
  const AnalysisParams p = AnalysisParams::from_psnr(3.0, 50.0);
  const auto d = subregion_distributions(p);
  double widest = p.noise.sigma;
  for (const auto& l : p.layers) widest = std::max(widest, l.sigma);
  EXPECT_LE(d.target.sigma, widest / std::sqrt(25.0) + 1e-12);
}

TEST(Subregion, RejectsOverfullOccupancy) {
  AnalysisParams p = all_background();
  p.occupancy = {10, 10, 10};
  EXPECT_THROW(subregion_distributions(p), std::invalid_argument);
}

TEST(MaxGray, SinglePixelIsItsOwnCdf) {
  AnalysisParams p = all_background();
  p.n0 = 1;
  for (double g : {10.0, 30.0, 41.5})
    EXPECT_DOUBLE_EQ(max_gray_cdf(p, g), 0.5 * std::erfc(-(g - 30.0) / (8.0 * std::sqrt(2.0))));
}

TEST(MaxGray, PdfIsDerivativeOfCdf) {
  const AnalysisParams p = AnalysisParams::from_psnr(2.0);
  for (double g : {35.0, 45.0, 55.0, 70.0}) {
    const double h = 1e-4;
    const double numeric = (max_gray_cdf(p, g + h) - max_gray_cdf(p, g - h)) / (2 * h);
    EXPECT_NEAR(max_gray_pdf(p, g), numeric, 1e-7);
  }
}

TEST(MaxGray, MonteCarloMatchesAnalyticCdf) {
  const AnalysisParams p = AnalysisParams::from_psnr(2.0);
  const auto samples = max_gray_samples(p, 100000, 11);
  EXPECT_LT(ks_statistic(samples, [&](double g) { return max_gray_cdf(p, g); }), 0.01);
}

TEST(MaxGray, FeaturePdfsOverlapLessThanPixelPdfs) {
  const AnalysisParams p = AnalysisParams::from_psnr(2.0);
  const auto d = subregion_distributions(p);
  auto bmean = [&](double x) { return normal_pdf(x, d.background.mu, d.background.sigma); };
  auto tmean = [&](double x) { return normal_pdf(x, d.target.mu, d.target.sigma); };
  auto gmax = [&](double x) { return max_gray_pdf(p, x); };
  auto bpix = [&](double x) { return normal_pdf(x, p.noise.mu, p.noise.sigma); };
  auto cpix = [&](double x) { return normal_pdf(x, p.layers[1].mu, p.layers[1].sigma); };
  const double pixels = overlap_coefficient(bpix, cpix, -20.0, 120.0);
  EXPECT_LT(overlap_coefficient(bmean, tmean, -20.0, 120.0), pixels);
  EXPECT_LT(overlap_coefficient(bmean, gmax, -20.0, 120.0), pixels);
  EXPECT_LT(overlap_coefficient(tmean, gmax, -20.0, 120.0), pixels);
}

TEST(WeightedSum, AllBackgroundFeatures) {
  AnalysisParams p = all_background();
  p.background_features = 25;
  Rng rng(2);
  double sum = 0.0;
  for (int i = 0; i < kTileCount; ++i) sum += (p.weights[i] = rng.uniform(-1, 1));
  EXPECT_NEAR(weighted_sum_distribution(p).mu, 30.0 * sum, 1e-9);
}

TEST(WeightedSum, ZeroWeightsDegenerate) {
  const AnalysisParams p = AnalysisParams::from_psnr(2.0);
  const Gaussian a = weighted_sum_distribution(p);
  EXPECT_EQ(a.mu, 0.0);
  EXPECT_EQ(a.sigma, 0.0);
}

TEST(WeightedSum, MonteCarloMoments) {
  AnalysisParams p = AnalysisParams::from_psnr(2.0);
  Rng rng(3);
  for (int i = 0; i < kTileCount; ++i) p.weights[i] = rng.uniform(-0.05, 0.05);
  p.weights[kCenterTile] = 0.2;
  const Gaussian a = weighted_sum_distribution(p);
  const std::size_t n = 20000;
  const SampleMoments mc = moments(a1_samples(p, n, 9));
  EXPECT_NEAR(mc.mean, a.mu, 3.0 * a.sigma / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(mc.std, a.sigma, 3.0 * a.sigma / std::sqrt(2.0 * static_cast<double>(n)));
}

TEST(WeightedSum, SecondTermSamples) {
  AnalysisParams p = AnalysisParams::from_psnr(2.0);
  p.weights[kCenterMax] = 1.0;
  const auto a2 = a2_samples(p, 2000, 4);
  ASSERT_EQ(a2.size(), 2000u);
  // g_max minus the smallest tile mean is positive at this contrast.
  for (double v : a2) EXPECT_GT(v, 0.0);
}

TEST(Densities, TableAndCsv) {
  TempDir dir("analysis");
  const DensityTable t = feature_densities(AnalysisParams::from_psnr(2.0), 101);
  ASSERT_EQ(t.grid.size(), 101u);
  ASSERT_EQ(t.columns.size(), t.names.size());
  // Each column is a density: it integrates to about one on the grid.
  const double h = t.grid[1] - t.grid[0];
  for (const auto& col : t.columns) EXPECT_NEAR(std::accumulate(col.begin(), col.end(), 0.0) * h, 1.0, 0.02);
  write_density_csv(t, dir / "d.csv", {"prov"});
  std::ifstream in(dir / "d.csv");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line, "gray,background_mean,target_mean,max_gray,background_pixel,central_pixel");
}

TEST(Densities, HistogramIntegratesToOne) {
  const AnalysisParams p = AnalysisParams::from_psnr(2.0);
  const auto s = max_gray_samples(p, 50000, 6);
  const DensityTable h = histogram_density(s, 0.0, 150.0, 150, "mc");
  EXPECT_NEAR(std::accumulate(h.columns[0].begin(), h.columns[0].end(), 0.0), 1.0, 1e-6);
}
