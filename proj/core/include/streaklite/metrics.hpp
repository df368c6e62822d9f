#pragma once

#include <span>

#include "streaklite/frame.hpp"

namespace streaklite {

enum class CentroidWeighting {
  /// max(g - background_mu, 0); the default.
  background_subtracted,
  /// Raw gray levels.
  raw,
};

/// Gray-weighted centroid of `pixels`. Throws std::invalid_argument when the
/// set is empty or every weight is zero.
Point2 centroid(const Frame& frame, std::span<const Pixel> pixels, double background_mu,
                CentroidWeighting weighting = CentroidWeighting::background_subtracted);

double centroid_error(Point2 c, Point2 reference) noexcept;

/// |a n b| / |a u b| of two pixel sets (duplicates ignored). Two empty sets
/// are identical and score 1.
double iou(std::span<const Pixel> a, std::span<const Pixel> b);
double iou(const BinaryMap& a, const BinaryMap& b);

}  // namespace streaklite
