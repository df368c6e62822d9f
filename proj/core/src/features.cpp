#include "streaklite/features.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace streaklite {

bool template_fits(int width, int height, int cx, int cy) noexcept {
  return cx - kTemplateRadius >= 0 && cy - kTemplateRadius >= 0 && cx + kTemplateRadius < width &&
         cy + kTemplateRadius < height;
}

FeatureVector features_from_tiles(const std::array<double, kTileCount>& tile_sums, double center_max) noexcept {
  std::array<double, kTileCount> means;
  for (int i = 0; i < kTileCount; ++i) means[i] = tile_sums[i] / static_cast<double>(kTileSize * kTileSize);
  const double m_bck = *std::min_element(means.begin(), means.end());
  FeatureVector x;
  for (int i = 0; i < kTileCount; ++i) x[i] = means[i] - m_bck;
  x[kCenterMax] = center_max - m_bck;
  return x;
}

FeatureVector extract_features(const Frame& frame, int cx, int cy) {
  if (!template_fits(frame.width(), frame.height(), cx, cy)) {
    throw std::out_of_range("25x25 template centered on (" + std::to_string(cx) + ", " + std::to_string(cy) +
                            ") does not fit a " + std::to_string(frame.width()) + "x" +
                            std::to_string(frame.height()) + " frame");
  }
  std::array<double, kTileCount> sums{};
  double center_max = 0.0;
  const int x0 = cx - kTemplateRadius;
  const int y0 = cy - kTemplateRadius;
  for (int ty = 0; ty < kTilesPerSide; ++ty) {
    for (int tx = 0; tx < kTilesPerSide; ++tx) {
      const int px = x0 + tx * kTileSize;
      const int py = y0 + ty * kTileSize;
      double tile = 0.0;
      double tile_max = frame.at(px, py);
      for (int r = 0; r < kTileSize; ++r) {
        double row = frame.at(px, py + r);
        for (int c = 1; c < kTileSize; ++c) row += frame.at(px + c, py + r);
        tile += row;
        for (int c = 0; c < kTileSize; ++c) tile_max = std::max(tile_max, frame.at(px + c, py + r));
      }
      sums[ty * kTilesPerSide + tx] = tile;
      if (ty * kTilesPerSide + tx == kCenterTile) center_max = tile_max;
    }
  }
  return features_from_tiles(sums, center_max);
}

FeatureField::FeatureField(const Frame& frame)
    : width_(frame.width()),
      height_(frame.height()),
      box_w_(std::max(0, frame.width() - kTileSize + 1)),
      box_h_(std::max(0, frame.height() - kTileSize + 1)) {
  if (box_w_ == 0 || box_h_ == 0) return;
  // Horizontal pass over every row, then vertical pass over the row sums.
  std::vector<double> hsum(static_cast<std::size_t>(box_w_) * static_cast<std::size_t>(height_));
  std::vector<double> hmax(hsum.size());
  for (int y = 0; y < height_; ++y) {
    auto row = frame.row(y);
    double* hs = hsum.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(box_w_);
    double* hm = hmax.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(box_w_);
    for (int x = 0; x < box_w_; ++x) {
      double s = row[x];
      double m = row[x];
      for (int c = 1; c < kTileSize; ++c) {
        s += row[x + c];
        m = std::max(m, row[x + c]);
      }
      hs[x] = s;
      hm[x] = m;
    }
  }
  sums_.assign(static_cast<std::size_t>(box_w_) * static_cast<std::size_t>(box_h_), 0.0);
  maxes_.assign(sums_.size(), 0.0);
  for (int y = 0; y < box_h_; ++y) {
    double* out_s = sums_.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(box_w_);
    double* out_m = maxes_.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(box_w_);
    const double* first_s = hsum.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(box_w_);
    const double* first_m = hmax.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(box_w_);
    for (int x = 0; x < box_w_; ++x) {
      out_s[x] = 0.0 + first_s[x];
      out_m[x] = first_m[x];
    }
    for (int r = 1; r < kTileSize; ++r) {
      const double* hs = first_s + static_cast<std::size_t>(r) * static_cast<std::size_t>(box_w_);
      const double* hm = first_m + static_cast<std::size_t>(r) * static_cast<std::size_t>(box_w_);
      for (int x = 0; x < box_w_; ++x) {
        out_s[x] += hs[x];
        out_m[x] = std::max(out_m[x], hm[x]);
      }
    }
  }
}

FeatureVector FeatureField::at(int cx, int cy) const noexcept {
  std::array<double, kTileCount> sums;
  const int x0 = cx - kTemplateRadius;
  const int y0 = cy - kTemplateRadius;
  for (int ty = 0; ty < kTilesPerSide; ++ty)
    for (int tx = 0; tx < kTilesPerSide; ++tx)
      sums[ty * kTilesPerSide + tx] = box_sum(x0 + tx * kTileSize, y0 + ty * kTileSize);
  const int c = kTilesPerSide / 2 * kTileSize;
  return features_from_tiles(sums, box_max(x0 + c, y0 + c));
}

}  // namespace streaklite
