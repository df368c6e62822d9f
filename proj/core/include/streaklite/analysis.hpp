#pragma once

// Closed-form capability analysis of the 25x25 template under i.i.d.
// Gaussian noise, with a 3-pixel-wide streak modelled as three Gaussian
// layers crossing the target sub-region.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "streaklite/features.hpp"
#include "streaklite/streak.hpp"

namespace streaklite {

struct Gaussian {
  double mu = 0.0;
  double sigma = 1.0;
};

inline constexpr int kStreakLayers = 3;

struct AnalysisParams {
  /// Pixels per sub-region.
  int n0 = kTileSize * kTileSize;
  Gaussian noise{30.0, 8.0};
  std::array<Gaussian, kStreakLayers> layers{};
  /// |S_t n l_i| for the target sub-region.
  std::array<int, kStreakLayers> occupancy{};
  /// Number of sub-regions holding background only; the remaining 25 - k are
  /// modelled with the target sub-region distribution.
  int background_features = kTileCount - 1;
  FeatureVector weights{};
  double bias = 0.0;

  int background_count() const noexcept;
  /// Throws std::invalid_argument when occupancy exceeds n0, k is outside
  /// [0, 25] or a sigma is not positive.
  void validate() const;

  /// Layer model implied by a Gaussian PSF: the centre layer peaks at
  /// mu_N + psnr * sigma_N and the side layers sample the profile one pixel
  /// off-axis. Occupancy comes from occupancy_for_angle.
  static AnalysisParams from_psnr(double psnr, double angle_deg = 30.0, Gaussian noise = {30.0, 8.0},
                                  double psf_sigma = kDefaultPsfSigma);
};

/// Layer counts of a 3-pixel line through the centre of a side x side
/// sub-region: a pixel belongs to layer round(d) + 2 (1-based) when its
/// perpendicular distance d to the axis satisfies |d| < 1.5.
std::array<int, kStreakLayers> occupancy_for_angle(double angle_deg, int side = kTileSize);

struct SubregionDistributions {
  Gaussian background;
  Gaussian target;
};

SubregionDistributions subregion_distributions(const AnalysisParams& params);

double normal_pdf(double x, double mu, double sigma) noexcept;
double normal_cdf(double x, double mu, double sigma) noexcept;

/// CDF of the brightest pixel of the target sub-region.
double max_gray_cdf(const AnalysisParams& params, double g);
/// Derivative of max_gray_cdf.
double max_gray_pdf(const AnalysisParams& params, double g);
/// Brightest pixel of independently drawn target sub-regions.
std::vector<double> max_gray_samples(const AnalysisParams& params, std::size_t n, std::uint64_t seed);

/// Mean and std of A1, the weighted sum of the 25 sub-region means.
Gaussian weighted_sum_distribution(const AnalysisParams& params);
/// Monte-Carlo draws of A1 from simulated sub-region means.
std::vector<double> a1_samples(const AnalysisParams& params, std::size_t n, std::uint64_t seed);
/// Monte-Carlo draws of A2 = w26 * (g_m - min sub-region mean).
std::vector<double> a2_samples(const AnalysisParams& params, std::size_t n, std::uint64_t seed);

/// sup |F_empirical - cdf| over the sample points.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Integral of min(f, g) over [lo, hi] by the midpoint rule.
double overlap_coefficient(const std::function<double(double)>& f, const std::function<double(double)>& g, double lo,
                           double hi, int steps = 20000);

struct DensityTable {
  std::vector<double> grid;
  std::vector<std::string> names;
  /// columns[i][j] is density i at grid[j].
  std::vector<std::vector<double>> columns;
};

/// Background-mean, target-mean, g_m, single background pixel and central
/// pixel densities on a common grid. g_m is evaluated analytically.
DensityTable feature_densities(const AnalysisParams& params, int points = 801);

/// Histogram density of samples on [lo, hi] with `bins` equal bins.
DensityTable histogram_density(std::span<const double> samples, double lo, double hi, int bins, std::string name);

void write_density_csv(const DensityTable& table, const std::filesystem::path& path,
                       const std::vector<std::string>& comment = {});

}  // namespace streaklite
