#include "streaklite/growth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "streaklite/csv.hpp"
#include "streaklite/error.hpp"
#include "streaklite/metrics.hpp"

namespace streaklite {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMinSigma = 1e-6;

int round_half_up(double v) noexcept { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

Direction Direction::from_angle(double degrees) noexcept {
  return {std::cos(degrees * kDegToRad), std::sin(degrees * kDegToRad)};
}

double Direction::angle_deg() const noexcept { return std::atan2(dy, dx) / kDegToRad; }

double Direction::axis_angle_deg() const noexcept {
  double a = angle_deg();
  while (a < 0.0) a += 180.0;
  while (a >= 180.0) a -= 180.0;
  return a;
}

Pixel LayerGeometry::pixel(int u, int offset) const noexcept {
  const auto [dx, dy] = direction;
  if (x_major()) {
    const double y = origin.y + (u - origin.x) * dy / dx + offset / dx;
    return {u, round_half_up(y)};
  }
  const double x = origin.x + (u - origin.y) * dx / dy - offset / dy;
  return {round_half_up(x), u};
}

int LayerGeometry::forward_step() const noexcept {
  const double major = x_major() ? direction.dx : direction.dy;
  return major >= 0.0 ? 1 : -1;
}

int LayerModel::seed_center() const noexcept { return std::clamp(central, 2, kLayerCount - 1); }

void GrowthConfig::validate() const {
  if (!(search_halfwidth_deg > 0.0)) throw std::invalid_argument("search half-width must be positive");
  if (!(search_step_deg > 0.0)) throw std::invalid_argument("search step must be positive");
  if (max_growth < 1) throw std::invalid_argument("max growth must be at least 1");
}

InitialGeometry initial_geometry(const Component& component, const Frame& frame, double background_mu) {
  if (component.size() < 2) throw std::invalid_argument("initial geometry needs at least 2 pixels");
  Point2 c0;
  try {
    c0 = centroid(frame, component.pixels, background_mu);
  } catch (const std::invalid_argument&) {
    // Nothing above background: fall back to the geometric center.
    c0 = centroid(Frame(frame.width(), frame.height(), 1.0), component.pixels, 0.0);
  }
  const Pixel* furthest = &component.pixels.front();
  double best = -1.0;
  for (const Pixel& p : component.pixels) {
    const double d = (p.x - c0.x) * (p.x - c0.x) + (p.y - c0.y) * (p.y - c0.y);
    if (d > best) {
      best = d;
      furthest = &p;
    }
  }
  const double len = std::sqrt(best);
  return {c0, {(furthest->x - c0.x) / len, (furthest->y - c0.y) / len}};
}

std::pair<int, int> major_extent(const Component& component, Direction direction) {
  if (component.pixels.empty()) throw std::invalid_argument("extent of an empty component");
  const bool xm = std::abs(direction.dx) >= std::abs(direction.dy);
  int lo = xm ? component.pixels.front().x : component.pixels.front().y;
  int hi = lo;
  for (const Pixel& p : component.pixels) {
    lo = std::min(lo, xm ? p.x : p.y);
    hi = std::max(hi, xm ? p.x : p.y);
  }
  return {lo, hi};
}

LayerPixels rasterize_layers(const Frame& frame, const LayerGeometry& geometry) {
  LayerPixels layers;
  for (int j = 0; j < kLayerCount; ++j) {
    auto& layer = layers[static_cast<std::size_t>(j)];
    for (int u = geometry.u_begin; u <= geometry.u_end; ++u) {
      const Pixel p = geometry.pixel(u, j - 2);
      if (!frame.contains(p.x, p.y)) {
        throw std::out_of_range("layer " + std::to_string(j + 1) + " leaves the frame at (" + std::to_string(p.x) +
                                ", " + std::to_string(p.y) + ")");
      }
      layer.push_back(p);
    }
  }
  return layers;
}

double log_normal_density(double g, double mu, double sigma) noexcept {
  const double z = (g - mu) / sigma;
  return -0.5 * z * z - std::log(std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double log_ajpd(std::span<const double> grays, double mu, double sigma) {
  if (grays.empty()) throw std::invalid_argument("log_ajpd of an empty sequence");
  if (!(sigma > 0.0)) throw std::invalid_argument("log_ajpd needs a positive sigma");
  double quad = 0.0;
  for (double g : grays) quad += (g - mu) * (g - mu);
  return -quad / (2.0 * sigma * sigma * static_cast<double>(grays.size())) -
         std::log(std::sqrt(2.0 * std::numbers::pi) * sigma);
}

std::optional<DirectionFit> score_direction(const Frame& frame, const Component& component, Point2 c0,
                                            Direction direction, const BackgroundStats& bck) {
  LayerGeometry geometry{c0, direction, 0, -1};
  std::tie(geometry.u_begin, geometry.u_end) = major_extent(component, direction);
  LayerPixels layers;
  try {
    layers = rasterize_layers(frame, geometry);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }

  DirectionFit fit;
  LayerModel& model = fit.layers;
  model.geometry = geometry;
  model.mu_b = bck.mu_hat;
  model.sigma_b = std::max(bck.sigma_hat, kMinSigma);
  const double sigma_floor = std::max(0.5 * bck.sigma_hat, kMinSigma);

  std::array<std::vector<double>, kLayerCount> members;
  for (int j = 0; j < kLayerCount; ++j) {
    for (const Pixel& p : layers[static_cast<std::size_t>(j)]) {
      if (component.contains(p)) members[static_cast<std::size_t>(j)].push_back(frame.at(p));
    }
    const auto& g = members[static_cast<std::size_t>(j)];
    model.counts[static_cast<std::size_t>(j)] = static_cast<int>(g.size());
    if (g.empty()) {
      model.mu[static_cast<std::size_t>(j)] = model.mu_b;
      model.sigma[static_cast<std::size_t>(j)] = model.sigma_b;
      continue;
    }
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    double var = 0.0;
    for (double v : g) var += (v - mean) * (v - mean);
    const double sd = g.size() > 1 ? std::sqrt(var / static_cast<double>(g.size() - 1)) : 0.0;
    model.mu[static_cast<std::size_t>(j)] = mean;
    model.sigma[static_cast<std::size_t>(j)] = std::max(sd, sigma_floor);
  }

  int m = 0;
  for (int j = 1; j < kLayerCount; ++j) {
    if (model.counts[static_cast<std::size_t>(j)] > 0 &&
        (model.counts[static_cast<std::size_t>(m)] == 0 || model.mu[static_cast<std::size_t>(j)] > model.mu[static_cast<std::size_t>(m)])) {
      m = j;
    }
  }
  model.central = m + 1;
  if (members[static_cast<std::size_t>(m)].size() < 3) return std::nullopt;
  // The whole central line over the extent is scored, so candidates that
  // leave the component pay for the background pixels they cross.
  std::vector<double> axis;
  for (const Pixel& p : layers[static_cast<std::size_t>(m)]) axis.push_back(frame.at(p));
  fit.score = log_ajpd(axis, model.mu[static_cast<std::size_t>(m)], model.sigma[static_cast<std::size_t>(m)]);
  return fit;
}

DirectionFit optimal_direction(const Frame& frame, const Component& component, Point2 c0, Direction k0,
                               const BackgroundStats& bck, const GrowthConfig& config) {
  config.validate();
  const double theta0 = k0.angle_deg();
  const int half = static_cast<int>(std::llround(config.search_halfwidth_deg / config.search_step_deg));
  std::optional<DirectionFit> best;
  // Visit 0, -1, +1, -2, +2, ... so that a strict comparison keeps the
  // candidate nearest k0 on ties.
  for (int i = 0; i <= 2 * half; ++i) {
    const int s = (i % 2 == 0) ? i / 2 : -(i + 1) / 2;
    const Direction d = Direction::from_angle(theta0 + s * config.search_step_deg);
    auto fit = score_direction(frame, component, c0, d, bck);
    if (fit && (!best || fit->score > best->score)) best = std::move(fit);
  }
  if (!best) throw std::runtime_error("no candidate direction has 3 pixels on its central layer");
  return *best;
}

std::array<std::vector<Pixel>, 3> seed_layers(const Frame& frame, const LayerModel& model) {
  std::array<std::vector<Pixel>, 3> out;
  const int center = model.seed_center();
  for (int i = 0; i < 3; ++i) {
    const int offset = center - 1 + i - 3;
    for (int u = model.geometry.u_begin; u <= model.geometry.u_end; ++u) {
      const Pixel p = model.geometry.pixel(u, offset);
      if (!frame.contains(p.x, p.y)) throw std::out_of_range("seed layer leaves the frame");
      out[static_cast<std::size_t>(i)].push_back(p);
    }
  }
  return out;
}

double seed_jpd(const Frame& frame, const LayerModel& model) {
  const auto layers = seed_layers(frame, model);
  const int first = model.seed_center() - 2;  // zero-based layer index of the first seed layer
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto j = static_cast<std::size_t>(first + i);
    for (const Pixel& p : layers[static_cast<std::size_t>(i)]) total += log_normal_density(frame.at(p), model.mu[j], model.sigma[j]);
  }
  return total;
}

DetectionResult grow(const Frame& frame, const LayerModel& model, const GrowthConfig& config) {
  config.validate();
  DetectionResult result;
  result.direction = model.geometry.direction;
  result.grown = true;

  const auto seeds = seed_layers(frame, model);
  for (const auto& layer : seeds) result.seed.pixels.insert(result.seed.pixels.end(), layer.begin(), layer.end());
  std::sort(result.seed.pixels.begin(), result.seed.pixels.end());
  result.seed.pixels.erase(std::unique(result.seed.pixels.begin(), result.seed.pixels.end()), result.seed.pixels.end());
  result.seed_log_jpd = seed_jpd(frame, model);

  const int first = model.seed_center() - 2;
  const int offsets[3] = {first - 2, first - 1, first};
  const int forward = model.geometry.forward_step();
  std::vector<Pixel> accepted;

  auto run = [&](int step, int start_u) {
    int grown = 0;
    for (int u = start_u; grown < config.max_growth; u += step) {
      Pixel next[3];
      bool inside = true;
      for (int i = 0; i < 3; ++i) {
        next[i] = model.geometry.pixel(u, offsets[i]);
        inside = inside && frame.contains(next[i].x, next[i].y);
      }
      if (!inside) {
        result.hit_edge = true;
        break;
      }
      double log_target = 0.0;
      double log_background = 0.0;
      for (int i = 0; i < 3; ++i) {
        const auto j = static_cast<std::size_t>(first + i);
        const double a = frame.at(next[i]);
        log_target += log_normal_density(a, model.mu[j], model.sigma[j]);
        log_background += log_normal_density(a, model.mu_b, model.sigma_b);
      }
      if (!(log_target > log_background)) break;
      accepted.insert(accepted.end(), next, next + 3);
      ++grown;
    }
    return grown;
  };

  const int end_u = forward > 0 ? model.geometry.u_end : model.geometry.u_begin;
  const int begin_u = forward > 0 ? model.geometry.u_begin : model.geometry.u_end;
  result.grew_forward = run(forward, end_u + forward);
  result.grew_backward = run(-forward, begin_u - forward);

  result.component.pixels = result.seed.pixels;
  result.component.pixels.insert(result.component.pixels.end(), accepted.begin(), accepted.end());
  std::sort(result.component.pixels.begin(), result.component.pixels.end());
  result.component.pixels.erase(std::unique(result.component.pixels.begin(), result.component.pixels.end()),
                                result.component.pixels.end());
  try {
    result.centroid = centroid(frame, result.component.pixels, model.mu_b);
  } catch (const std::invalid_argument&) {
    result.centroid = centroid(frame, result.component.pixels, model.mu_b, CentroidWeighting::raw);
  }
  return result;
}

std::vector<DetectionResult> refine(const Frame& frame, const std::vector<Component>& components,
                                    const BackgroundStats& bck, const GrowthConfig& config) {
  config.validate();
  std::vector<DetectionResult> out;
  out.reserve(components.size());
  for (const Component& crude : components) {
    DetectionResult r;
    try {
      const InitialGeometry init = initial_geometry(crude, frame, bck.mu_hat);
      const DirectionFit fit = optimal_direction(frame, crude, init.c0, init.k0, bck, config);
      r = grow(frame, fit.layers, config);
    } catch (const std::invalid_argument&) {
      r.grown = false;
    } catch (const std::out_of_range&) {
      r.grown = false;
    } catch (const std::runtime_error&) {
      r.grown = false;
    }
    if (!r.grown) {
      r = DetectionResult{};
      r.component = crude;
      r.seed = crude;
      if (crude.size() >= 2) r.direction = initial_geometry(crude, frame, bck.mu_hat).k0;
      try {
        r.centroid = centroid(frame, crude.pixels, bck.mu_hat);
      } catch (const std::invalid_argument&) {
        r.centroid = centroid(frame, crude.pixels, bck.mu_hat, CentroidWeighting::raw);
      }
    }
    r.crude = crude;
    out.push_back(std::move(r));
  }
  return out;
}

void write_detections_csv(const std::vector<DetectionResult>& results, const std::filesystem::path& path,
                          const std::vector<std::string>& comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& c : comment) out << "# " << c << '\n';
  out << "id,centroid_x,centroid_y,angle_deg,size,grew_fwd,grew_bwd,seed_log_jpd\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out << i << ',' << format_double(r.centroid.x) << ',' << format_double(r.centroid.y) << ','
        << format_double(r.direction.axis_angle_deg()) << ',' << r.component.size() << ',' << r.grew_forward << ','
        << r.grew_backward << ',' << format_double(r.grown ? r.seed_log_jpd : std::nan("")) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace streaklite
