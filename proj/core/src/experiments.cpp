#include "streaklite/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "streaklite/csv.hpp"
#include "streaklite/error.hpp"
#include "streaklite/metrics.hpp"
#include "streaklite/parallel.hpp"
#include "streaklite/rng.hpp"

namespace streaklite {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Scores a set of output components against the ideal mask.
struct Match {
  double union_iou = 0.0;
  double best_iou = 0.0;
  int best = -1;
};

Match match_components(const std::vector<const std::vector<Pixel>*>& comps, const BinaryMap& ideal) {
  Match m;
  const std::vector<Pixel> truth = ideal.pixels();
  std::vector<Pixel> all;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double v = iou(*comps[i], truth);
    if (v > m.best_iou) {
      m.best_iou = v;
      m.best = static_cast<int>(i);
    }
    all.insert(all.end(), comps[i]->begin(), comps[i]->end());
  }
  m.union_iou = comps.empty() ? 0.0 : iou(all, truth);
  return m;
}

MetricRow base_row(const LabeledSample& trial, Method method) {
  MetricRow r;
  r.seed = trial.seed;
  r.measured_psnr = trial.psnr;
  r.length = trial.streak.length;
  r.method = method;
  return r;
}

void fill_match(MetricRow& row, const Match& m, std::optional<Point2> best_centroid, Point2 truth,
                std::size_t count) {
  row.components = static_cast<int>(count);
  row.iou = m.union_iou;
  row.detected = m.best >= 0 && m.best_iou >= kDetectionIou;
  row.centroid_error = row.detected && best_centroid ? centroid_error(*best_centroid, truth) : std::nan("");
}

Point2 component_centroid(const Frame& frame, const std::vector<Pixel>& pixels, double mu) {
  try {
    return centroid(frame, pixels, mu);
  } catch (const std::invalid_argument&) {
    return centroid(frame, pixels, mu, CentroidWeighting::raw);
  }
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::crude: return "crude";
    case Method::grown: return "grown";
    case Method::baseline: return "baseline";
  }
  return "?";
}

std::string_view to_string(SweepKind k) noexcept {
  switch (k) {
    case SweepKind::psnr: return "psnr";
    case SweepKind::length: return "length";
    case SweepKind::noise_sigma: return "noise_sigma";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::crude, Method::grown, Method::baseline}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

SweepKind parse_sweep_kind(std::string_view name) {
  for (SweepKind k : {SweepKind::psnr, SweepKind::length, SweepKind::noise_sigma}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown sweep kind '" + std::string(name) + "'");
}

LabeledSample make_trial(const TrialSpec& spec, std::uint64_t seed) {
  if (!(spec.length >= 0.0) || !(spec.psnr > 0.0) || !(spec.noise_sigma > 0.0) || !(spec.psf_sigma > 0.0)) {
    throw std::invalid_argument("trial needs length >= 0 and positive psnr, noise and psf widths");
  }
  const double margin = kTemplateRadius + 2.0 + 0.5 * spec.length + 3.0 * spec.psf_sigma;
  const double x_hi = spec.width - 1 - margin;
  const double y_hi = spec.height - 1 - margin;
  if (x_hi < margin || y_hi < margin) throw std::invalid_argument("trial frame is too small for the streak");

  Rng rng(seed);
  StreakParams s;
  s.angle_deg = spec.angle_deg ? *spec.angle_deg : rng.uniform(0.0, 180.0);
  s.length = spec.length;
  s.psf_sigma = spec.psf_sigma;
  s.center = {rng.uniform(margin, x_hi), rng.uniform(margin, y_hi)};
  const NoiseParams noise{spec.noise_mu, spec.noise_sigma, rng.next()};
  s.intensity = calibrate_intensity(spec.psnr, s, noise, spec.width, spec.height);

  LabeledSample out;
  out.streak = s;
  out.seed = seed;
  out.clean = render_streak(Frame(spec.width, spec.height, spec.noise_mu), s);
  out.ideal_mask = ideal_mask(out.clean, spec.noise_mu);
  out.frame = render_streak(gaussian_background(spec.width, spec.height, noise), s);
  out.psnr = psnr_of(out.clean, out.ideal_mask, background_stats(out.frame));
  return out;
}

std::vector<MetricRow> evaluate_trial(const LabeledSample& trial, const std::vector<Method>& methods,
                                      const LinearModel& model, const DirectionalBank* bank,
                                      const PipelineConfig& config) {
  const Frame& frame = trial.frame;
  const Point2 truth = trial.streak.center;
  const BackgroundStats bck = background_stats(frame);
  const bool need_crude = std::ranges::any_of(methods, [](Method m) { return m != Method::baseline; });

  std::vector<Component> crude;
  double crude_seconds = 0.0;
  if (need_crude) {
    const auto t0 = Clock::now();
    crude = crude_classify(frame, model, config.min_size);
    crude_seconds = seconds_since(t0);
  }

  std::vector<MetricRow> rows;
  for (Method method : methods) {
    MetricRow row = base_row(trial, method);
    std::vector<const std::vector<Pixel>*> sets;
    std::optional<Point2> best_centroid;
    switch (method) {
      case Method::crude: {
        for (const auto& c : crude) sets.push_back(&c.pixels);
        const Match m = match_components(sets, trial.ideal_mask);
        if (m.best >= 0) best_centroid = component_centroid(frame, crude[static_cast<std::size_t>(m.best)].pixels, bck.mu_hat);
        fill_match(row, m, best_centroid, truth, crude.size());
        row.runtime = crude_seconds;
        break;
      }
      case Method::grown: {
        const auto t0 = Clock::now();
        const auto results = refine(frame, crude, bck, config.growth);
        row.runtime = crude_seconds + seconds_since(t0);
        for (const auto& r : results) sets.push_back(&r.component.pixels);
        const Match m = match_components(sets, trial.ideal_mask);
        if (m.best >= 0) best_centroid = results[static_cast<std::size_t>(m.best)].centroid;
        fill_match(row, m, best_centroid, truth, results.size());
        break;
      }
      case Method::baseline: {
        if (!bank) throw std::invalid_argument("baseline method requested without a filter bank");
        BaselineConfig bc = config.baseline;
        bc.threads = 1;
        const auto t0 = Clock::now();
        const auto comps = baseline_detect(frame, *bank, bc);
        row.runtime = seconds_since(t0);
        for (const auto& c : comps) sets.push_back(&c.pixels);
        const Match m = match_components(sets, trial.ideal_mask);
        if (m.best >= 0) best_centroid = component_centroid(frame, comps[static_cast<std::size_t>(m.best)].pixels, bck.mu_hat);
        fill_match(row, m, best_centroid, truth, comps.size());
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<MetricRow> run_sweep(const SweepConfig& config, const LinearModel& model, const DirectionalBank* bank) {
  if (config.grid.empty()) throw std::invalid_argument("sweep grid is empty");
  if (config.methods.empty()) throw std::invalid_argument("sweep needs at least one method");
  if (config.trials < 1) throw std::invalid_argument("sweep needs at least one trial");
  if (!bank && std::ranges::find(config.methods, Method::baseline) != config.methods.end()) {
    throw std::invalid_argument("baseline method requested without a filter bank");
  }
  config.pipeline.growth.validate();

  const std::size_t per_point = static_cast<std::size_t>(config.trials);
  const std::size_t total = config.grid.size() * per_point;
  std::vector<std::vector<MetricRow>> slots(total);
  parallel_for(total, config.threads, [&](std::size_t i) {
    const std::size_t g = i / per_point;
    const std::size_t t = i % per_point;
    TrialSpec spec = config.base;
    const double v = config.grid[g];
    switch (config.kind) {
      case SweepKind::psnr: spec.psnr = v; break;
      case SweepKind::length: spec.length = v; break;
      case SweepKind::noise_sigma: spec.noise_sigma = v; break;
    }
    const std::uint64_t seed = split_seed(split_seed(config.seed, g), t);
    const LabeledSample trial = make_trial(spec, seed);
    auto rows = evaluate_trial(trial, config.methods, model, bank, config.pipeline);
    for (auto& r : rows) {
      r.grid_index = static_cast<int>(g);
      r.trial = static_cast<int>(t);
      r.psnr = spec.psnr;
      r.noise_sigma = spec.noise_sigma;
    }
    slots[i] = std::move(rows);
  });

  std::vector<MetricRow> out;
  out.reserve(total * config.methods.size());
  for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::vector<SweepSummary> summarize(const std::vector<MetricRow>& rows, SweepKind kind) {
  struct Acc {
    SweepSummary s;
    int detected = 0;
    double err = 0.0;
  };
  std::vector<Acc> acc;
  std::map<std::pair<int, Method>, std::size_t> index;
  for (const MetricRow& r : rows) {
    const auto key = std::make_pair(r.grid_index, r.method);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, acc.size()).first;
      Acc a;
      a.s.method = r.method;
      a.s.value = kind == SweepKind::psnr ? r.psnr : kind == SweepKind::length ? r.length : r.noise_sigma;
      acc.push_back(a);
    }
    Acc& a = acc[it->second];
    ++a.s.trials;
    a.s.mean_iou += r.iou;
    a.s.mean_runtime += r.runtime;
    if (r.detected) {
      ++a.detected;
      a.err += r.centroid_error;
    }
  }
  std::vector<SweepSummary> out;
  for (Acc& a : acc) {
    a.s.detection_rate = static_cast<double>(a.detected) / a.s.trials;
    a.s.mean_centroid_error = a.detected > 0 ? a.err / a.detected : std::nan("");
    a.s.mean_iou /= a.s.trials;
    a.s.mean_runtime /= a.s.trials;
    out.push_back(a.s);
  }
  return out;
}

void write_metric_rows_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path,
                           const std::vector<std::string>& comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& c : comment) out << "# " << c << '\n';
  out << "grid_index,trial,seed,psnr,measured_psnr,length,noise_sigma,method,centroid_error,iou,detected,components,"
         "runtime\n";
  for (const MetricRow& r : rows) {
    out << r.grid_index << ',' << r.trial << ',' << r.seed << ',' << format_double(r.psnr) << ','
        << format_double(r.measured_psnr) << ',' << format_double(r.length) << ',' << format_double(r.noise_sigma)
        << ',' << to_string(r.method) << ',' << format_double(r.centroid_error) << ',' << format_double(r.iou) << ','
        << (r.detected ? 1 : 0) << ',' << r.components << ',' << format_double(r.runtime) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void write_summary_csv(const std::vector<SweepSummary>& summary, SweepKind kind, const std::filesystem::path& path,
                       const std::vector<std::string>& comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& c : comment) out << "# " << c << '\n';
  out << to_string(kind) << ",method,trials,detection_rate,mean_centroid_error,mean_iou,mean_runtime\n";
  for (const SweepSummary& s : summary) {
    out << format_double(s.value) << ',' << to_string(s.method) << ',' << s.trials << ','
        << format_double(s.detection_rate) << ',' << format_double(s.mean_centroid_error) << ','
        << format_double(s.mean_iou) << ',' << format_double(s.mean_runtime) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Frame benchmark_frame(const BenchmarkConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  const NoiseParams noise{30.0, 8.0, rng.next()};
  Frame frame = gaussian_background(config.width, config.height, noise);
  const double margin = kTemplateRadius + 2.0 + 0.5 * config.length + 3.0;
  for (int i = 0; i < config.streaks; ++i) {
    StreakParams s;
    s.angle_deg = rng.uniform(0.0, 180.0);
    s.length = config.length;
    s.center = {rng.uniform(margin, config.width - 1 - margin), rng.uniform(margin, config.height - 1 - margin)};
    s.intensity = calibrate_intensity(config.psnr, s, noise, config.width, config.height);
    frame = render_streak(frame, s);
  }
  return frame;
}

BenchmarkReport benchmark(const BenchmarkConfig& config, const LinearModel& model, const DirectionalBank* bank) {
  if (config.repetitions < 1) throw std::invalid_argument("benchmark needs at least one repetition");
  if (config.frames < 1 || config.warmup < 0) throw std::invalid_argument("benchmark needs frames >= 1, warmup >= 0");
  std::vector<Frame> frames;
  for (int i = 0; i < config.frames; ++i) frames.push_back(benchmark_frame(config, split_seed(config.seed, i)));

  auto proposed = [&](const Frame& f) {
    const auto crude = crude_classify(f, model, config.pipeline.min_size, 1);
    return refine(f, crude, background_stats(f), config.pipeline.growth).size();
  };
  BaselineConfig bc = config.pipeline.baseline;
  bc.threads = 1;
  auto base = [&](const Frame& f) { return baseline_detect(f, *bank, bc).size(); };

  auto time_mean = [&](auto&& run) {
    std::size_t sink = 0;
    for (int i = 0; i < config.warmup; ++i) sink += run(frames[static_cast<std::size_t>(i) % frames.size()]);
    const auto t0 = Clock::now();
    for (int i = 0; i < config.repetitions; ++i) sink += run(frames[static_cast<std::size_t>(i) % frames.size()]);
    const double mean = seconds_since(t0) / config.repetitions;
    // Keeps the result observable so the calls cannot be elided.
    if (sink == static_cast<std::size_t>(-1)) throw std::logic_error("unreachable");
    return mean;
  };

  BenchmarkReport report;
  report.width = config.width;
  report.height = config.height;
  report.repetitions = config.repetitions;
  report.proposed_seconds = time_mean(proposed);
  report.baseline_seconds = bank ? time_mean(base) : std::nan("");
  report.ratio = report.proposed_seconds / report.baseline_seconds;
  return report;
}

}  // namespace streaklite
