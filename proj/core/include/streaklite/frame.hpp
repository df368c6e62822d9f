#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace streaklite {

/// Integer pixel coordinate; x is the column, y the row.
struct Pixel {
  int x = 0;
  int y = 0;

  /// Raster order: row first, then column.
  friend constexpr auto operator<=>(const Pixel& a, const Pixel& b) noexcept {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
  friend constexpr bool operator==(const Pixel&, const Pixel&) noexcept = default;
};

/// Sub-pixel position in the same axes as Pixel.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend constexpr bool operator==(const Point2&, const Point2&) noexcept = default;
};

/// Row-major grayscale image with real-valued, non-negative gray levels.
/// Quantization to 8 bits happens only when writing PGM files.
class Frame {
 public:
  Frame() = default;
  /// Constant frame. Throws std::invalid_argument on non-positive dimensions.
  Frame(int width, int height, double fill = 0.0);
  /// Takes ownership of `pixels`; its size must equal width * height.
  Frame(int width, int height, std::vector<double> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  double at(int x, int y) const noexcept { return pixels_[index(x, y)]; }
  double& at(int x, int y) noexcept { return pixels_[index(x, y)]; }
  double at(Pixel p) const noexcept { return at(p.x, p.y); }

  std::span<const double> pixels() const noexcept { return pixels_; }
  std::span<double> pixels() noexcept { return pixels_; }
  std::span<const double> row(int y) const noexcept {
    return std::span<const double>(pixels_).subspan(index(0, y), static_cast<std::size_t>(width_));
  }

  /// Copy with `offset` added to every pixel.
  Frame plus(double offset) const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// Binary map with the same geometry conventions as Frame.
class BinaryMap {
 public:
  BinaryMap() = default;
  BinaryMap(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool at(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
  bool at(Pixel p) const noexcept { return at(p.x, p.y); }
  void set(int x, int y, bool v = true) noexcept { bits_[index(x, y)] = v ? 1 : 0; }
  void set(Pixel p, bool v = true) noexcept { set(p.x, p.y, v); }

  std::size_t count() const noexcept;
  /// Set pixels in raster order.
  std::vector<Pixel> pixels() const;
  static BinaryMap from_pixels(int width, int height, std::span<const Pixel> pixels);

  friend bool operator==(const BinaryMap&, const BinaryMap&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct NoiseParams {
  double mu = 30.0;
  double sigma = 8.0;
  std::uint64_t seed = 0;
};

struct BackgroundStats {
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
};

/// i.i.d. N(mu, sigma^2) pixels clamped at 0, drawn from Rng(noise.seed) in
/// raster order.
Frame gaussian_background(int width, int height, const NoiseParams& noise);

/// Sigma-clipped mean and standard deviation (3 sigma, 3 iterations).
BackgroundStats background_stats(const Frame& frame);

}  // namespace streaklite
