#include "streaklite/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "streaklite/csv.hpp"
#include "streaklite/error.hpp"
#include "streaklite/rng.hpp"

namespace streaklite {

namespace {

void require_positive(double sigma, const char* what) {
  if (!(sigma > 0.0)) throw std::invalid_argument(std::string(what) + " sigma must be positive");
}

double draw_target_max(const AnalysisParams& p, Rng& rng, double* mean_out) {
  double best = -INFINITY;
  double sum = 0.0;
  auto take = [&](double g) {
    best = std::max(best, g);
    sum += g;
  };
  for (int i = 0; i < p.background_count(); ++i) take(rng.normal(p.noise.mu, p.noise.sigma));
  for (int l = 0; l < kStreakLayers; ++l) {
    for (int i = 0; i < p.occupancy[static_cast<std::size_t>(l)]; ++i) {
      take(rng.normal(p.layers[static_cast<std::size_t>(l)].mu, p.layers[static_cast<std::size_t>(l)].sigma));
    }
  }
  if (mean_out) *mean_out = sum / p.n0;
  return best;
}

double draw_background_mean(const AnalysisParams& p, Rng& rng) {
  double sum = 0.0;
  for (int i = 0; i < p.n0; ++i) sum += rng.normal(p.noise.mu, p.noise.sigma);
  return sum / p.n0;
}

}  // namespace

int AnalysisParams::background_count() const noexcept {
  return n0 - occupancy[0] - occupancy[1] - occupancy[2];
}

void AnalysisParams::validate() const {
  if (n0 < 1) throw std::invalid_argument("sub-region size must be positive");
  for (int c : occupancy) {
    if (c < 0) throw std::invalid_argument("negative layer occupancy");
  }
  if (background_count() < 0) throw std::invalid_argument("layer occupancy exceeds the sub-region size");
  if (background_features < 0 || background_features > kTileCount) {
    throw std::invalid_argument("background feature count must lie in [0, 25]");
  }
  require_positive(noise.sigma, "noise");
  for (const auto& l : layers) require_positive(l.sigma, "layer");
}

AnalysisParams AnalysisParams::from_psnr(double psnr, double angle_deg, Gaussian noise, double psf_sigma) {
  require_positive(psf_sigma, "psf");
  AnalysisParams p;
  p.noise = noise;
  const double peak = psnr * noise.sigma;
  const double side = peak * std::exp(-1.0 / (2.0 * psf_sigma * psf_sigma));
  p.layers = {Gaussian{noise.mu + side, noise.sigma}, Gaussian{noise.mu + peak, noise.sigma},
              Gaussian{noise.mu + side, noise.sigma}};
  p.occupancy = occupancy_for_angle(angle_deg);
  p.validate();
  return p;
}

std::array<int, kStreakLayers> occupancy_for_angle(double angle_deg, int side) {
  if (side < 1 || side % 2 == 0) throw std::invalid_argument("sub-region side must be odd and positive");
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double s = std::sin(a);
  const double c = std::cos(a);
  const int r = side / 2;
  std::array<int, kStreakLayers> counts{};
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double d = -dx * s + dy * c;
      if (std::abs(d) >= 1.5) continue;
      ++counts[static_cast<std::size_t>(std::lround(d) + 1)];
    }
  }
  return counts;
}

SubregionDistributions subregion_distributions(const AnalysisParams& p) {
  p.validate();
  const double n0 = p.n0;
  SubregionDistributions out;
  out.background = {p.noise.mu, p.noise.sigma / std::sqrt(n0)};
  double mean = p.background_count() * p.noise.mu;
  double var = p.background_count() * p.noise.sigma * p.noise.sigma;
  for (std::size_t l = 0; l < kStreakLayers; ++l) {
    mean += p.occupancy[l] * p.layers[l].mu;
    var += p.occupancy[l] * p.layers[l].sigma * p.layers[l].sigma;
  }
  out.target = {mean / n0, std::sqrt(var) / n0};
  return out;
}

double normal_pdf(double x, double mu, double sigma) noexcept {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double normal_cdf(double x, double mu, double sigma) noexcept {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

double max_gray_cdf(const AnalysisParams& p, double g) {
  p.validate();
  double f = std::pow(normal_cdf(g, p.noise.mu, p.noise.sigma), p.background_count());
  for (std::size_t l = 0; l < kStreakLayers; ++l) {
    f *= std::pow(normal_cdf(g, p.layers[l].mu, p.layers[l].sigma), p.occupancy[l]);
  }
  return f;
}

double max_gray_pdf(const AnalysisParams& p, double g) {
  p.validate();
  // Product rule over the four groups of identically distributed pixels;
  // written without dividing by a CDF so that it stays finite in the tails.
  std::array<Gaussian, kStreakLayers + 1> groups{p.noise, p.layers[0], p.layers[1], p.layers[2]};
  std::array<int, kStreakLayers + 1> counts{p.background_count(), p.occupancy[0], p.occupancy[1], p.occupancy[2]};
  std::array<double, kStreakLayers + 1> cdf{};
  for (std::size_t j = 0; j < groups.size(); ++j) cdf[j] = normal_cdf(g, groups[j].mu, groups[j].sigma);
  double total = 0.0;
  for (std::size_t j = 0; j < groups.size(); ++j) {
    if (counts[j] == 0) continue;
    double term = counts[j] * normal_pdf(g, groups[j].mu, groups[j].sigma) * std::pow(cdf[j], counts[j] - 1);
    for (std::size_t l = 0; l < groups.size(); ++l) {
      if (l != j) term *= std::pow(cdf[l], counts[l]);
    }
    total += term;
  }
  return total;
}

std::vector<double> max_gray_samples(const AnalysisParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = draw_target_max(p, rng, nullptr);
  return out;
}

Gaussian weighted_sum_distribution(const AnalysisParams& p) {
  const auto d = subregion_distributions(p);
  double mean = 0.0;
  double var = 0.0;
  for (int i = 0; i < kTileCount; ++i) {
    const double w = p.weights[static_cast<std::size_t>(i)];
    const Gaussian& g = i < p.background_features ? d.background : d.target;
    mean += w * g.mu;
    var += w * w * g.sigma * g.sigma;
  }
  return {mean, std::sqrt(var)};
}

std::vector<double> a1_samples(const AnalysisParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) {
    double a = 0.0;
    for (int i = 0; i < kTileCount; ++i) {
      double mean = 0.0;
      if (i < p.background_features) {
        mean = draw_background_mean(p, rng);
      } else {
        draw_target_max(p, rng, &mean);
      }
      a += p.weights[static_cast<std::size_t>(i)] * mean;
    }
    v = a;
  }
  return out;
}

std::vector<double> a2_samples(const AnalysisParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) {
    double lowest = INFINITY;
    double g_max = -INFINITY;
    for (int i = 0; i < kTileCount; ++i) {
      double mean = 0.0;
      if (i < p.background_features) {
        mean = draw_background_mean(p, rng);
      } else {
        g_max = std::max(g_max, draw_target_max(p, rng, &mean));
      }
      lowest = std::min(lowest, mean);
    }
    if (p.background_features == kTileCount) g_max = draw_target_max(p, rng, nullptr);
    v = p.weights[kCenterMax] * (g_max - lowest);
  }
  return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double overlap_coefficient(const std::function<double(double)>& f, const std::function<double(double)>& g, double lo,
                           double hi, int steps) {
  if (!(hi > lo) || steps < 1) throw std::invalid_argument("overlap needs hi > lo and positive steps");
  const double h = (hi - lo) / steps;
  double total = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double x = lo + (i + 0.5) * h;
    total += std::min(f(x), g(x));
  }
  return total * h;
}

DensityTable feature_densities(const AnalysisParams& p, int points) {
  if (points < 2) throw std::invalid_argument("density grid needs at least 2 points");
  const auto d = subregion_distributions(p);
  const Gaussian centre = p.layers[1];
  const double lo = p.noise.mu - 5.0 * p.noise.sigma;
  const double hi = std::max(centre.mu, p.noise.mu) + 6.0 * std::max(centre.sigma, p.noise.sigma);
  DensityTable t;
  t.names = {"background_mean", "target_mean", "max_gray", "background_pixel", "central_pixel"};
  t.columns.assign(t.names.size(), {});
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    t.grid.push_back(x);
    t.columns[0].push_back(normal_pdf(x, d.background.mu, d.background.sigma));
    t.columns[1].push_back(normal_pdf(x, d.target.mu, d.target.sigma));
    t.columns[2].push_back(max_gray_pdf(p, x));
    t.columns[3].push_back(normal_pdf(x, p.noise.mu, p.noise.sigma));
    t.columns[4].push_back(normal_pdf(x, centre.mu, centre.sigma));
  }
  return t;
}

DensityTable histogram_density(std::span<const double> samples, double lo, double hi, int bins, std::string name) {
  if (!(hi > lo) || bins < 1) throw std::invalid_argument("histogram needs hi > lo and positive bins");
  DensityTable t;
  t.names = {std::move(name)};
  t.columns.assign(1, std::vector<double>(static_cast<std::size_t>(bins), 0.0));
  const double w = (hi - lo) / bins;
  for (int b = 0; b < bins; ++b) t.grid.push_back(lo + (b + 0.5) * w);
  for (double s : samples) {
    if (s < lo || s >= hi) continue;
    const auto b = std::min(static_cast<std::size_t>((s - lo) / w), static_cast<std::size_t>(bins - 1));
    t.columns[0][b] += 1.0;
  }
  if (!samples.empty()) {
    for (double& c : t.columns[0]) c /= static_cast<double>(samples.size()) * w;
  }
  return t;
}

void write_density_csv(const DensityTable& table, const std::filesystem::path& path,
                       const std::vector<std::string>& comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& c : comment) out << "# " << c << '\n';
  out << "gray";
  for (const auto& n : table.names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    out << format_double(table.grid[i]);
    for (const auto& col : table.columns) out << ',' << format_double(col[i]);
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace streaklite
