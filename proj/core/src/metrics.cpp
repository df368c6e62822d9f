#include "streaklite/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace streaklite {

Point2 centroid(const Frame& frame, std::span<const Pixel> pixels, double background_mu, CentroidWeighting weighting) {
  if (pixels.empty()) throw std::invalid_argument("centroid of an empty pixel set");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (const Pixel& p : pixels) {
    const double g = frame.at(p);
    const double w = weighting == CentroidWeighting::raw ? g : std::max(g - background_mu, 0.0);
    sw += w;
    sx += w * p.x;
    sy += w * p.y;
  }
  if (!(sw > 0.0)) throw std::invalid_argument("centroid weights are all zero");
  return {sx / sw, sy / sw};
}

double centroid_error(Point2 c, Point2 reference) noexcept { return std::hypot(c.x - reference.x, c.y - reference.y); }

double iou(std::span<const Pixel> a, std::span<const Pixel> b) {
  std::vector<Pixel> sa(a.begin(), a.end());
  std::vector<Pixel> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::vector<Pixel> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  const std::size_t uni = sa.size() + sb.size() - common.size();
  return static_cast<double>(common.size()) / static_cast<double>(uni);
}

double iou(const BinaryMap& a, const BinaryMap& b) {
  if (a.width() != b.width() || a.height() != b.height()) throw std::invalid_argument("iou of maps of different size");
  std::size_t inter = 0, uni = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      const bool pa = a.at(x, y);
      const bool pb = b.at(x, y);
      inter += pa && pb;
      uni += pa || pb;
    }
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace streaklite
