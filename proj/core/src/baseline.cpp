#include "streaklite/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "streaklite/parallel.hpp"

namespace streaklite {

std::vector<double> build_kernel(int kernel_size, double angle_deg, double profile_sigma) {
  if (kernel_size < 1 || kernel_size % 2 == 0) throw std::invalid_argument("kernel size must be odd and positive");
  if (!(profile_sigma > 0.0)) throw std::invalid_argument("profile sigma must be positive");
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double nx = -std::sin(a);
  const double ny = std::cos(a);
  const int r = kernel_size / 2;
  std::vector<double> k;
  k.reserve(static_cast<std::size_t>(kernel_size) * static_cast<std::size_t>(kernel_size));
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double d = dx * nx + dy * ny;
      k.push_back(std::exp(-d * d / (2.0 * profile_sigma * profile_sigma)));
    }
  }
  double mean = 0.0;
  for (double v : k) mean += v;
  mean /= static_cast<double>(k.size());
  double norm = 0.0;
  for (double& v : k) {
    v -= mean;
    norm += v * v;
  }
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw std::invalid_argument("kernel is constant");
  for (double& v : k) v /= norm;
  return k;
}

DirectionalBank build_bank(int kernel_size, int count, double profile_sigma) {
  if (count < 1) throw std::invalid_argument("bank needs at least one direction");
  DirectionalBank bank;
  bank.kernel_size = kernel_size;
  for (int i = 0; i < count; ++i) {
    const double angle = 180.0 * i / count;
    bank.angles_deg.push_back(angle);
    bank.kernels.push_back(build_kernel(kernel_size, angle, profile_sigma));
  }
  return bank;
}

Frame filter_response(const Frame& frame, const std::vector<double>& kernel, int kernel_size) {
  const int w = frame.width();
  const int h = frame.height();
  const int r = kernel_size / 2;
  if (static_cast<std::size_t>(kernel_size) * static_cast<std::size_t>(kernel_size) != kernel.size()) {
    throw std::invalid_argument("kernel size does not match tap count");
  }
  if (w <= kernel_size || h <= kernel_size) throw std::invalid_argument("frame must be larger than the kernel");
  Frame out(w, h, 0.0);
  const auto src = frame.pixels();
  auto dst = out.pixels();
  const int span = w - 2 * r;
  for (int y = r; y < h - r; ++y) {
    double* o = dst.data() + static_cast<std::size_t>(y) * w + r;
    for (int ky = 0; ky < kernel_size; ++ky) {
      const double* in_row = src.data() + static_cast<std::size_t>(y - r + ky) * w;
      for (int kx = 0; kx < kernel_size; ++kx) {
        const double t = kernel[static_cast<std::size_t>(ky * kernel_size + kx)];
        const double* in = in_row + kx;
        for (int x = 0; x < span; ++x) o[x] += t * in[x];
      }
    }
  }
  return out;
}

Frame suppressed_response(const Frame& frame, const DirectionalBank& bank, int nms_radius, unsigned threads) {
  if (nms_radius < 0) throw std::invalid_argument("nms radius must be non-negative");
  const int w = frame.width();
  const int h = frame.height();
  std::vector<Frame> kept(bank.count());
  parallel_for(bank.count(), threads, [&](std::size_t k) {
    const Frame resp = filter_response(frame, bank.kernels[k], bank.kernel_size);
    const double a = bank.angles_deg[k] * std::numbers::pi / 180.0;
    const double nx = -std::sin(a);
    const double ny = std::cos(a);
    std::vector<Pixel> steps;
    for (int t = 1; t <= nms_radius; ++t) {
      const Pixel s{static_cast<int>(std::lround(t * nx)), static_cast<int>(std::lround(t * ny))};
      steps.push_back(s);
      steps.push_back({-s.x, -s.y});
    }
    Frame out(w, h, -INFINITY);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double v = resp.at(x, y);
        bool is_max = true;
        for (const Pixel& s : steps) {
          const int xx = x + s.x;
          const int yy = y + s.y;
          if (resp.contains(xx, yy) && resp.at(xx, yy) > v) {
            is_max = false;
            break;
          }
        }
        if (is_max) out.at(x, y) = v;
      }
    }
    kept[k] = std::move(out);
  });
  Frame best(w, h, -INFINITY);
  for (const Frame& f : kept) {
    auto b = best.pixels();
    const auto s = f.pixels();
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::max(b[i], s[i]);
  }
  return best;
}

std::vector<Component> baseline_detect(const Frame& frame, const DirectionalBank& bank, const BaselineConfig& config) {
  if (bank.count() == 0) throw std::invalid_argument("empty filter bank");
  if (frame.width() <= bank.kernel_size || frame.height() <= bank.kernel_size) {
    throw std::invalid_argument("frame must be larger than the kernel");
  }
  const Frame best = suppressed_response(frame, bank, config.nms_radius, config.threads);
  BinaryMap map(frame.width(), frame.height());
  const int r = bank.kernel_size / 2;
  for (int y = r; y < frame.height() - r; ++y) {
    for (int x = r; x < frame.width() - r; ++x) {
      if (best.at(x, y) > config.response_threshold) map.set(x, y);
    }
  }
  return filter_components(connected_components(map), config.min_size);
}

double calibrate_response_threshold(const DirectionalBank& bank, const NoiseParams& noise, int width, int height,
                                    double factor) {
  const Frame bg = gaussian_background(width, height, noise);
  const int r = bank.kernel_size / 2;
  double sum = 0.0;
  double sum2 = 0.0;
  double n = 0.0;
  for (const auto& kernel : bank.kernels) {
    const Frame resp = filter_response(bg, kernel, bank.kernel_size);
    for (int y = r; y < height - r; ++y) {
      for (int x = r; x < width - r; ++x) {
        const double v = resp.at(x, y);
        sum += v;
        sum2 += v * v;
        n += 1.0;
      }
    }
  }
  const double mean = sum / n;
  return factor * std::sqrt(std::max(sum2 / n - mean * mean, 0.0));
}

}  // namespace streaklite
