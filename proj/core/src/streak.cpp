#include "streaklite/streak.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace streaklite {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Contributions beyond this many psf sigmas are below 1e-13 of the peak.
constexpr double kWindowSigmas = 8.0;
constexpr double kEdgeSigmas = 3.0;

void validate(const StreakParams& s) {
  if (!(s.psf_sigma > 0.0)) throw std::invalid_argument("psf_sigma must be positive");
  if (!(s.length >= 0.0)) throw std::invalid_argument("streak length must be non-negative");
  if (!(s.intensity >= 0.0)) throw std::invalid_argument("streak intensity must be non-negative");
  if (!(s.exposure > 0.0)) throw std::invalid_argument("exposure must be positive");
  if (!std::isfinite(s.center.x) || !std::isfinite(s.center.y) || !std::isfinite(s.angle_deg)) {
    throw std::invalid_argument("streak geometry must be finite");
  }
}

}  // namespace

int quadrature_steps(double length) noexcept {
  return std::max(32, static_cast<int>(std::ceil(8.0 * length)));
}

std::pair<Point2, Point2> streak_endpoints(const StreakParams& s) noexcept {
  const double a = s.angle_deg * kDegToRad;
  const double hx = 0.5 * s.length * std::cos(a);
  const double hy = 0.5 * s.length * std::sin(a);
  return {{s.center.x - hx, s.center.y - hy}, {s.center.x + hx, s.center.y + hy}};
}

Frame streak_signal(int width, int height, const StreakParams& s) {
  validate(s);
  Frame out(width, height);
  const auto [a, b] = streak_endpoints(s);
  const double pad = kEdgeSigmas * s.psf_sigma;
  const double xmin = std::min(a.x, b.x) - pad;
  const double xmax = std::max(a.x, b.x) + pad;
  const double ymin = std::min(a.y, b.y) - pad;
  const double ymax = std::max(a.y, b.y) + pad;
  if (xmin < 0.0 || ymin < 0.0 || xmax > width - 1 || ymax > height - 1) {
    std::ostringstream msg;
    msg << "streak extends outside the " << width << "x" << height << " frame: padded extent x [" << xmin << ", "
        << xmax << "], y [" << ymin << ", " << ymax << "]";
    throw std::out_of_range(msg.str());
  }

  const int steps = quadrature_steps(s.length);
  const double dt = s.exposure / steps;
  const double two_var = 2.0 * s.psf_sigma * s.psf_sigma;
  const double scale = s.intensity / (std::numbers::pi * two_var) * dt;

  std::vector<Point2> path(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    // Midpoint of the k-th time slice; position is linear in t.
    const double f = (k + 0.5) / steps;
    path[static_cast<std::size_t>(k)] = {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
  }

  const double win = kWindowSigmas * s.psf_sigma;
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - win)));
  const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + win)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - win)));
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + win)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double acc = 0.0;
      for (const Point2& c : path) {
        const double dx = x - c.x;
        const double dy = y - c.y;
        acc += std::exp(-(dx * dx + dy * dy) / two_var);
      }
      out.at(x, y) = scale * acc;
    }
  }
  return out;
}

Frame render_streak(const Frame& background, const StreakParams& streak) {
  Frame signal = streak_signal(background.width(), background.height(), streak);
  auto bg = background.pixels();
  auto px = signal.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] += bg[i];
  return signal;
}

double psnr_of(const Frame& frame, const BinaryMap& mask, const BackgroundStats& bck) {
  if (mask.width() != frame.width() || mask.height() != frame.height()) {
    throw std::invalid_argument("mask and frame dimensions differ");
  }
  if (!(bck.sigma_hat > 0.0)) throw std::invalid_argument("psnr_of needs a positive background sigma");
  bool any = false;
  double g_max = 0.0;
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      if (!mask.at(x, y)) continue;
      g_max = any ? std::max(g_max, frame.at(x, y)) : frame.at(x, y);
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("psnr_of needs a non-empty mask");
  return (g_max - bck.mu_hat) / bck.sigma_hat;
}

double calibrate_intensity(double target_psnr, const StreakParams& streak, const NoiseParams& noise,
                           int frame_width, int frame_height) {
  if (!(target_psnr >= 0.0)) throw std::invalid_argument("target PSNR must be non-negative");
  if (target_psnr == 0.0) return 0.0;
  const double target_peak = target_psnr * noise.sigma;

  // The signal is linear in intensity, so one unit-intensity render gives the
  // peak of every candidate exactly.
  StreakParams unit = streak;
  unit.intensity = 1.0;
  const Frame unit_signal = streak_signal(frame_width, frame_height, unit);
  const double unit_peak = *std::max_element(unit_signal.pixels().begin(), unit_signal.pixels().end());
  if (!(unit_peak > 0.0)) throw std::runtime_error("streak has no visible signal to calibrate");
  auto peak = [&](double intensity) { return intensity * unit_peak; };

  double lo = 0.0;
  double hi = 1.0;
  int iterations = 0;
  while (peak(hi) < target_peak) {
    lo = hi;
    hi *= 2.0;
    if (++iterations >= 100) throw std::runtime_error("intensity calibration failed to bracket the target");
  }
  for (; iterations < 100; ++iterations) {
    const double mid = 0.5 * (lo + hi);
    const double p = peak(mid);
    if (std::abs(p - target_peak) <= 1e-7 * target_peak) return mid;
    (p < target_peak ? lo : hi) = mid;
  }
  const double mid = 0.5 * (lo + hi);
  if (std::abs(peak(mid) - target_peak) <= 1e-3 * target_peak) return mid;
  throw std::runtime_error("intensity calibration did not converge in 100 iterations");
}

BinaryMap ideal_mask(const Frame& clean, double background_mu, double threshold) {
  BinaryMap mask(clean.width(), clean.height());
  for (int y = 0; y < clean.height(); ++y)
    for (int x = 0; x < clean.width(); ++x)
      if (clean.at(x, y) - background_mu >= threshold) mask.set(x, y);
  return mask;
}

double max_rotation_angle(const CameraGeometry& g) {
  if (!(g.half_fov_deg > 0.0 && g.half_fov_deg < 90.0)) throw std::invalid_argument("half FoV must be in (0, 90)");
  if (!(g.focal_length > 0.0)) throw std::invalid_argument("focal length must be positive");
  if (!(g.arch_height_limit >= 0.0)) throw std::invalid_argument("arch height limit must be non-negative");
  const double c = std::cos(g.half_fov_deg * kDegToRad);
  const double arg = 1.0 - c * c * c * c * g.arch_height_limit / g.focal_length;
  if (arg < -1.0 || arg > 1.0) throw std::domain_error("arccos argument outside [-1, 1]");
  return 2.0 * std::acos(arg) / kDegToRad;
}

}  // namespace streaklite
