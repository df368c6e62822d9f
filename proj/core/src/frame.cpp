#include "streaklite/frame.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "streaklite/rng.hpp"

namespace streaklite {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("frame dimensions must be positive, got " + std::to_string(width) +
                                "x" + std::to_string(height));
  }
}

}  // namespace

Frame::Frame(int width, int height, double fill) : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Frame::Frame(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("pixel count does not match frame dimensions");
  }
}

Frame Frame::plus(double offset) const {
  Frame out = *this;
  for (double& g : out.pixels_) g += offset;
  return out;
}

BinaryMap::BinaryMap(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

std::size_t BinaryMap::count() const noexcept {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

std::vector<Pixel> BinaryMap::pixels() const {
  std::vector<Pixel> out;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (at(x, y)) out.push_back({x, y});
  return out;
}

BinaryMap BinaryMap::from_pixels(int width, int height, std::span<const Pixel> pixels) {
  BinaryMap map(width, height);
  for (const Pixel& p : pixels) {
    if (!map.contains(p.x, p.y)) throw std::out_of_range("pixel outside map");
    map.set(p);
  }
  return map;
}

Frame gaussian_background(int width, int height, const NoiseParams& noise) {
  check_dims(width, height);
  if (!(noise.sigma >= 0.0) || !(noise.mu >= 0.0)) {
    throw std::invalid_argument("noise mu and sigma must be non-negative");
  }
  Frame frame(width, height);
  Rng rng(noise.seed);
  for (double& g : frame.pixels()) {
    // Zero sigma must give exactly mu, so skip the draw entirely.
    const double v = noise.sigma == 0.0 ? noise.mu : rng.normal(noise.mu, noise.sigma);
    g = v < 0.0 ? 0.0 : v;
  }
  return frame;
}

BackgroundStats background_stats(const Frame& frame) {
  if (frame.empty()) throw std::invalid_argument("background_stats of an empty frame");
  double mu = 0.0;
  double sigma = 0.0;
  bool first = true;
  for (int iter = 0; iter < 3; ++iter) {
    const double lo = mu - 3.0 * sigma;
    const double hi = mu + 3.0 * sigma;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (double g : frame.pixels()) {
      if (!first && (g < lo || g > hi)) continue;
      sum += g;
      ++n;
    }
    if (n == 0) break;
    const double mean = sum / static_cast<double>(n);
    for (double g : frame.pixels()) {
      if (!first && (g < lo || g > hi)) continue;
      sum_sq += (g - mean) * (g - mean);
    }
    mu = mean;
    sigma = std::sqrt(sum_sq / static_cast<double>(n));
    first = false;
  }
  return {mu, sigma};
}

}  // namespace streaklite
