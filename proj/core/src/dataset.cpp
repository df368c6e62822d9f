#include "streaklite/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "streaklite/csv.hpp"
#include "streaklite/error.hpp"
#include "streaklite/rng.hpp"

namespace streaklite {

void DatasetConfig::validate() const {
  if (frame_width < kTemplateSize || frame_height < kTemplateSize) {
    throw std::invalid_argument("dataset frames must be at least 25x25");
  }
  if (!(angle_min < angle_max)) throw std::invalid_argument("angle range is empty or inverted");
  if (!(length_min <= length_max) || length_min < 0.0) {
    throw std::invalid_argument("length range is empty or inverted");
  }
  if (!(noise_sigma > 0.0) || noise_mu < 0.0) throw std::invalid_argument("bad noise parameters");
  if (!(psnr_target > 0.0)) throw std::invalid_argument("PSNR target must be positive");
  if (!(background_share > 0.0 && background_share < 1.0)) {
    throw std::invalid_argument("background share must be in (0, 1)");
  }
  if (!(edge_share >= 0.0 && edge_share <= 1.0)) throw std::invalid_argument("edge share must be in [0, 1]");
  if (edge_radius < 1) throw std::invalid_argument("edge radius must be at least 1");
}

LabeledSample simulate_sample(const DatasetConfig& config, std::uint64_t sample_seed) {
  config.validate();
  Rng rng(sample_seed);
  const NoiseParams noise{config.noise_mu, config.noise_sigma, 0};
  for (int attempt = 0; attempt < 1000; ++attempt) {
    StreakParams s;
    s.angle_deg = rng.uniform(config.angle_min, config.angle_max);
    s.length = rng.uniform(config.length_min, config.length_max);
    s.psf_sigma = config.psf_sigma;
    s.center = {rng.uniform(kTemplateRadius, config.frame_width - 1 - kTemplateRadius),
                rng.uniform(kTemplateRadius, config.frame_height - 1 - kTemplateRadius)};
    const std::uint64_t noise_seed = rng.next();
    try {
      s.intensity = calibrate_intensity(config.psnr_target, s, noise, config.frame_width, config.frame_height);
    } catch (const std::out_of_range&) {
      continue;  // clipped placement, redraw
    }
    LabeledSample out;
    out.streak = s;
    out.seed = sample_seed;
    out.clean = render_streak(Frame(config.frame_width, config.frame_height, config.noise_mu), s);
    out.ideal_mask = ideal_mask(out.clean, config.noise_mu, config.mask_threshold);
    out.frame = render_streak(
        gaussian_background(config.frame_width, config.frame_height, {config.noise_mu, config.noise_sigma, noise_seed}),
        s);
    out.psnr = psnr_of(out.clean, out.ideal_mask, background_stats(out.frame));
    return out;
  }
  throw std::runtime_error("could not place a streak inside the frame after 1000 attempts");
}

std::vector<TrainingRow> sample_rows(const LabeledSample& sample, const DatasetConfig& config, int frame_index) {
  const Frame& frame = sample.frame;
  const BinaryMap& mask = sample.ideal_mask;
  const int w = frame.width();
  const int h = frame.height();

  std::vector<Pixel> positives;
  std::vector<Pixel> edge;
  std::vector<Pixel> far;
  for (int y = kTemplateRadius; y < h - kTemplateRadius; ++y) {
    for (int x = kTemplateRadius; x < w - kTemplateRadius; ++x) {
      if (mask.at(x, y)) {
        positives.push_back({x, y});
        continue;
      }
      bool near = false;
      for (int dy = -config.edge_radius; dy <= config.edge_radius && !near; ++dy)
        for (int dx = -config.edge_radius; dx <= config.edge_radius && !near; ++dx)
          near = mask.contains(x + dx, y + dy) && mask.at(x + dx, y + dy);
      (near ? edge : far).push_back({x, y});
    }
  }

  const auto n_neg = static_cast<std::size_t>(
      std::llround(static_cast<double>(positives.size()) * config.background_share / (1.0 - config.background_share)));
  std::size_t n_edge = std::min(edge.size(), static_cast<std::size_t>(std::llround(n_neg * config.edge_share)));
  std::size_t n_far = std::min(far.size(), n_neg - n_edge);
  // Top up from the edge band if the far region is too small.
  n_edge = std::min(edge.size(), n_neg - n_far);

  Rng rng(split_seed(sample.seed, 0x5eed));
  auto take = [&rng](std::vector<Pixel>& pool, std::size_t k) {
    // Partial Fisher-Yates: the first k entries become the sample.
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    pool.resize(k);
  };
  take(edge, n_edge);
  take(far, n_far);

  FeatureField field(frame);
  std::vector<TrainingRow> rows;
  rows.reserve(positives.size() + edge.size() + far.size());
  auto emit = [&](const std::vector<Pixel>& pixels, int label) {
    for (const Pixel& p : pixels) rows.push_back({field.at(p.x, p.y), label, frame_index, p.x, p.y});
  };
  emit(positives, 1);
  emit(edge, 0);
  emit(far, 0);
  return rows;
}

Dataset generate_dataset(int n_frames, const DatasetConfig& config, std::uint64_t seed) {
  if (n_frames <= 0) throw std::invalid_argument("n_frames must be positive");
  config.validate();
  Dataset out;
  for (int i = 0; i < n_frames; ++i) {
    LabeledSample sample = simulate_sample(config, split_seed(seed, static_cast<std::uint64_t>(i)));
    auto rows = sample_rows(sample, config, i);
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    if (config.keep_samples) out.samples.push_back(std::move(sample));
  }
  return out;
}

Dataset generate_dataset_rows(std::size_t min_rows, const DatasetConfig& config, std::uint64_t seed) {
  if (min_rows == 0) throw std::invalid_argument("min_rows must be positive");
  config.validate();
  Dataset out;
  for (int i = 0; out.rows.size() < min_rows; ++i) {
    LabeledSample sample = simulate_sample(config, split_seed(seed, static_cast<std::uint64_t>(i)));
    auto rows = sample_rows(sample, config, i);
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    if (config.keep_samples) out.samples.push_back(std::move(sample));
  }
  return out;
}

void write_rows_csv(const std::vector<TrainingRow>& rows, const std::filesystem::path& path,
                    const std::vector<std::string>& comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& c : comment) out << "# " << c << '\n';
  for (int i = 1; i <= kFeatureCount; ++i) out << 'x' << i << ',';
  out << "label\n";
  for (const auto& r : rows) {
    for (double v : r.x) out << format_double(v) << ',';
    out << r.label << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<TrainingRow> read_rows_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  std::vector<TrainingRow> rows;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("x1,", 0) != 0) throw IoError("dataset " + path.string() + " lacks the x1..x26,label header");
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != kFeatureCount + 1) {
      throw IoError("dataset " + path.string() + " line " + std::to_string(line_no) + ": expected 27 columns");
    }
    TrainingRow row;
    for (int i = 0; i < kFeatureCount; ++i) row.x[i] = parse_double(fields[i]);
    row.label = static_cast<int>(parse_double(fields[kFeatureCount]));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace streaklite
