#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "streaklite/frame.hpp"

namespace streaklite {

inline constexpr int kTileSize = 5;
inline constexpr int kTilesPerSide = 5;
inline constexpr int kTileCount = kTilesPerSide * kTilesPerSide;
inline constexpr int kTemplateSize = kTileSize * kTilesPerSide;  // 25
inline constexpr int kTemplateRadius = kTemplateSize / 2;        // 12
inline constexpr int kFeatureCount = kTileCount + 1;             // 26
/// Zero-based index of the central tile mean (x13).
inline constexpr int kCenterTile = kTileCount / 2;
/// Zero-based index of the central tile maximum (x26).
inline constexpr int kCenterMax = kTileCount;

/// Tile means in raster order (tile row-major, tile 13 centered on the
/// pixel) followed by the central-tile maximum, all minus the smallest tile
/// mean. Written into model files so training and inference agree.
inline constexpr std::string_view kFeatureOrderTag = "raster5x5-center13-max26";

using FeatureVector = std::array<double, kFeatureCount>;

/// True when the 25x25 template centered on (cx, cy) lies inside the frame.
bool template_fits(int width, int height, int cx, int cy) noexcept;

/// Local-contrast features of the template centered on (cx, cy).
/// Throws std::out_of_range when the template does not fit.
FeatureVector extract_features(const Frame& frame, int cx, int cy);

/// Subtracts the background tile mean. `tile_sums` are raw 5x5 sums.
FeatureVector features_from_tiles(const std::array<double, kTileCount>& tile_sums, double center_max) noexcept;

/// Precomputed 5x5 box sums and maxima so that every template position can
/// be evaluated in constant time. Results are bit-identical to
/// extract_features because both sum each tile row left to right and then
/// the rows top to bottom.
class FeatureField {
 public:
  explicit FeatureField(const Frame& frame);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  /// Caller guarantees template_fits(width(), height(), cx, cy).
  FeatureVector at(int cx, int cy) const noexcept;

 private:
  double box_sum(int x0, int y0) const noexcept {
    return sums_[static_cast<std::size_t>(y0) * static_cast<std::size_t>(box_w_) + static_cast<std::size_t>(x0)];
  }
  double box_max(int x0, int y0) const noexcept {
    return maxes_[static_cast<std::size_t>(y0) * static_cast<std::size_t>(box_w_) + static_cast<std::size_t>(x0)];
  }

  int width_;
  int height_;
  int box_w_;
  int box_h_;
  // Indexed by tile top-left corner.
  std::vector<double> sums_;
  std::vector<double> maxes_;
};

}  // namespace streaklite
