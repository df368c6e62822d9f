#pragma once

// Directional matched-filter detector used as the comparison baseline.
//
// This is a stand-in for the oriented-filter detectors streak pipelines are
// usually compared against, not a reimplementation of any particular one:
// a bank of zero-mean line kernels, per-direction non-maximum suppression,
// a threshold on the best response and the usual size filter. It exists for
// relative timing and for the stripe-noise contrast, nothing more.

#include <cstdint>
#include <vector>

#include "streaklite/detector.hpp"
#include "streaklite/frame.hpp"
#include "streaklite/streak.hpp"

namespace streaklite {

inline constexpr int kDefaultBankSize = 15;
inline constexpr int kDefaultKernelSize = 15;

struct DirectionalBank {
  int kernel_size = kDefaultKernelSize;
  std::vector<double> angles_deg;
  /// Row-major kernel_size x kernel_size taps, zero mean and unit L2 norm.
  std::vector<std::vector<double>> kernels;

  std::size_t count() const noexcept { return kernels.size(); }
};

/// Line kernel through the centre at `angle_deg` with a Gaussian cross
/// profile of width `profile_sigma`, made zero-mean and unit-norm. Throws
/// std::invalid_argument for even or non-positive sizes.
std::vector<double> build_kernel(int kernel_size, double angle_deg, double profile_sigma = kDefaultPsfSigma);

/// `count` kernels at angles i * 180 / count degrees.
DirectionalBank build_bank(int kernel_size = kDefaultKernelSize, int count = kDefaultBankSize,
                           double profile_sigma = kDefaultPsfSigma);

/// Correlation of `frame` with one kernel; pixels where the kernel does not
/// fit are 0.
Frame filter_response(const Frame& frame, const std::vector<double>& kernel, int kernel_size);

/// Per-pixel maximum over directions of the non-maximum-suppressed
/// responses. A response survives in its direction when no sample within
/// nms_radius along the kernel normal exceeds it.
Frame suppressed_response(const Frame& frame, const DirectionalBank& bank, int nms_radius = 2, unsigned threads = 1);

struct BaselineConfig {
  int nms_radius = 2;
  double response_threshold = 40.0;
  int min_size = kDefaultMinComponentSize;
  unsigned threads = 1;
};

/// Thresholded suppressed response, 8-connected components, size filter.
/// Throws std::invalid_argument when the frame is not larger than a kernel.
std::vector<Component> baseline_detect(const Frame& frame, const DirectionalBank& bank, const BaselineConfig& config);

/// `factor` times the standard deviation of the raw (unsuppressed) filter
/// responses on a noise-only frame, pooled over directions.
double calibrate_response_threshold(const DirectionalBank& bank, const NoiseParams& noise, int width = 256,
                                    int height = 256, double factor = 5.0);

}  // namespace streaklite
