#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <string>
#include <utility>
#include <optional>
#include <span>
#include <vector>

#include "streaklite/detector.hpp"
#include "streaklite/frame.hpp"

namespace streaklite {

/// Unit direction vector. Streaks are handled as vectors rather than slopes
/// so that vertical trails need no special case.
struct Direction {
  double dx = 1.0;
  double dy = 0.0;

  static Direction from_angle(double degrees) noexcept;
  /// Angle of the vector in degrees, in (-180, 180].
  double angle_deg() const noexcept;
  /// Axis angle in [0, 180) (head and tail are not distinguished).
  double axis_angle_deg() const noexcept;
  Direction reversed() const noexcept { return {-dx, -dy}; }
};

inline constexpr int kLayerCount = 5;

/// Five parallel digital lines around an axis. Layer j (1..5) is the line
/// through origin + (j - 3) * n, n = (-dy, dx), rasterized one pixel per step
/// along the dominant axis of the direction.
struct LayerGeometry {
  Point2 origin;
  Direction direction;
  /// Dominant-axis coordinate range covered (inclusive).
  int u_begin = 0;
  int u_end = -1;

  bool x_major() const noexcept { return std::abs(direction.dx) >= std::abs(direction.dy); }
  /// Pixel of the line with perpendicular offset `offset` (layer - 3) at
  /// dominant-axis coordinate u.
  Pixel pixel(int u, int offset) const noexcept;
  /// +1 when moving along `direction` increases u, else -1.
  int forward_step() const noexcept;
};

using LayerPixels = std::array<std::vector<Pixel>, kLayerCount>;

/// Fitted five-layer Gaussian model of one streak.
struct LayerModel {
  LayerGeometry geometry;
  std::array<double, kLayerCount> mu{};
  std::array<double, kLayerCount> sigma{};
  /// Component pixels that fell in each layer.
  std::array<int, kLayerCount> counts{};
  /// 1-based index of the brightest layer.
  int central = 3;
  double mu_b = 0.0;
  double sigma_b = 1.0;

  /// 1-based center of the three seed layers: `central` clamped to [2, 4].
  int seed_center() const noexcept;
};

struct GrowthConfig {
  double search_halfwidth_deg = 15.0;
  double search_step_deg = 0.5;
  int max_growth = 10;

  void validate() const;
};

struct InitialGeometry {
  Point2 c0;
  Direction k0;
};

/// Background-subtracted centroid and the direction toward the pixel
/// furthest from it (ties: first in raster order). Throws
/// std::invalid_argument for components with fewer than 2 pixels.
InitialGeometry initial_geometry(const Component& component, const Frame& frame, double background_mu);

/// Dominant-axis extent of a component for the given direction.
std::pair<int, int> major_extent(const Component& component, Direction direction);

/// Layers 1..5 over [u_begin, u_end], each ordered by u. Throws
/// std::out_of_range if any layer pixel leaves the frame.
LayerPixels rasterize_layers(const Frame& frame, const LayerGeometry& geometry);

/// Mean log-density of `grays` under N(mu, sigma^2), i.e. the log of the
/// geometric-mean density. Throws std::invalid_argument on an empty
/// sequence or non-positive sigma.
double log_ajpd(std::span<const double> grays, double mu, double sigma);

/// log N(g; mu, sigma^2).
double log_normal_density(double g, double mu, double sigma) noexcept;

struct DirectionFit {
  LayerModel layers;
  /// log AJPD of the central layer.
  double score = 0.0;
};

/// Layer statistics from the component pixels in each layer and the score of
/// the brightest layer. Empty when the geometry leaves the frame or the
/// central layer holds fewer than 3 component pixels.
std::optional<DirectionFit> score_direction(const Frame& frame, const Component& component, Point2 c0,
                                            Direction direction, const BackgroundStats& bck);

/// Best-scoring direction on the grid k0 +- halfwidth in fixed steps; ties go
/// to the candidate nearest k0. Throws std::runtime_error when no candidate
/// has 3 central-layer pixels.
DirectionFit optimal_direction(const Frame& frame, const Component& component, Point2 c0, Direction k0,
                               const BackgroundStats& bck, const GrowthConfig& config);

/// The three seed layers (seed_center - 1 .. seed_center + 1) over the model
/// extent, ordered as layers.
std::array<std::vector<Pixel>, 3> seed_layers(const Frame& frame, const LayerModel& model);

/// Sum of log densities of the seed pixels under their layer Gaussians.
double seed_jpd(const Frame& frame, const LayerModel& model);

struct DetectionResult {
  Component component;
  Point2 centroid;
  Direction direction;
  Component seed;
  Component crude;
  int grew_forward = 0;
  int grew_backward = 0;
  double seed_log_jpd = 0.0;
  /// False when the component did not meet the fitting preconditions and
  /// was passed through unchanged.
  bool grown = false;
  /// A growth run stopped because the next pixel left the frame.
  bool hit_edge = false;
};

/// Extends the seed forward and then backward, one pixel per seed layer per
/// step, while the target hypothesis is more likely than the background one
/// and fewer than max_growth steps were taken in that direction.
DetectionResult grow(const Frame& frame, const LayerModel& model, const GrowthConfig& config);

/// initial_geometry -> optimal_direction -> grow for every component.
std::vector<DetectionResult> refine(const Frame& frame, const std::vector<Component>& components,
                                    const BackgroundStats& bck, const GrowthConfig& config = {});

/// id,centroid_x,centroid_y,angle_deg,size,grew_fwd,grew_bwd,seed_log_jpd
void write_detections_csv(const std::vector<DetectionResult>& results, const std::filesystem::path& path,
                          const std::vector<std::string>& comment = {});

}  // namespace streaklite
