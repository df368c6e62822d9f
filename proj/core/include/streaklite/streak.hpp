#pragma once

#include "streaklite/frame.hpp"

namespace streaklite {

/// One uniformly moving point source integrated over the exposure.
///
/// The source moves at constant velocity from center - length/2 * u to
/// center + length/2 * u during [0, exposure], u = (cos angle, sin angle) in
/// pixel axes (x right, y down). The per-pixel signal is
///
///   I(x, y) = I_c / (2 pi s^2) * integral_0^T exp(-|p - c(t)|^2 / (2 s^2)) dt
///
/// so the total flux over the plane is intensity * exposure.
/// PSF width used by the simulators and the training recipe.
inline constexpr double kDefaultPsfSigma = 1.2;

struct StreakParams {
  Point2 center;
  double angle_deg = 0.0;
  double length = 0.0;
  double intensity = 0.0;
  double psf_sigma = kDefaultPsfSigma;
  double exposure = 1.0;
};

/// Star-camera constants for the straight-trail bound.
struct CameraGeometry {
  double half_fov_deg = 12.5;
  double focal_length = 25.0;
  double arch_height_limit = 0.0055;
};

/// Number of midpoint-rule time steps used for a streak of this length.
int quadrature_steps(double length) noexcept;

/// Unit-exposure endpoints of the streak axis.
std::pair<Point2, Point2> streak_endpoints(const StreakParams& streak) noexcept;

/// Signal added by the streak alone, on a zero frame of the given size.
/// Throws std::out_of_range if the streak (endpoints padded by 3 psf_sigma)
/// leaves the frame, std::invalid_argument on bad parameters.
Frame streak_signal(int width, int height, const StreakParams& streak);

/// background + streak_signal(...). The background is not modified.
Frame render_streak(const Frame& background, const StreakParams& streak);

/// (max gray over mask - bck.mu_hat) / bck.sigma_hat.
double psnr_of(const Frame& frame, const BinaryMap& mask, const BackgroundStats& bck);

/// Intensity whose noiseless peak sits target_psnr * noise.sigma above the
/// background, found by bisection to relative 1e-3 on the peak.
/// `frame_width`/`frame_height` bound the rendering; geometry comes from
/// `streak` (its intensity is ignored).
double calibrate_intensity(double target_psnr, const StreakParams& streak, const NoiseParams& noise,
                           int frame_width, int frame_height);

/// Pixels of a noiseless frame at least `threshold` above `background_mu`.
BinaryMap ideal_mask(const Frame& clean_frame, double background_mu, double threshold = 4.0);

/// Largest rotation within one exposure for which a trail stays within the
/// arch-height limit of a straight chord: 2 acos(1 - cos^4(phi) h / f), in
/// degrees. Throws std::domain_error when the acos argument leaves [-1, 1].
double max_rotation_angle(const CameraGeometry& geom);

}  // namespace streaklite
