#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "streaklite/analysis.hpp"
#include "streaklite/baseline.hpp"
#include "streaklite/classifier.hpp"
#include "streaklite/csv.hpp"
#include "streaklite/dataset.hpp"
#include "streaklite/detector.hpp"
#include "streaklite/error.hpp"
#include "streaklite/experiments.hpp"
#include "streaklite/growth.hpp"
#include "streaklite/parallel.hpp"
#include "streaklite/pgm.hpp"
#include "streaklite/rng.hpp"

namespace streaklite::cli {

namespace fs = std::filesystem;

namespace {

std::string indexed(const char* stem, int i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d%s", stem, i, ext);
  return buf;
}

fs::path required_path(const RunConfig& c, const std::string& key) {
  if (c.text(key).empty()) throw ConfigError("missing required key '" + key + "'");
  return c.path(key);
}

fs::path output_dir(const RunConfig& c) {
  const fs::path dir = required_path(c, "out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

unsigned threads(const RunConfig& c) {
  const int t = c.integer("threads");
  if (t < 0) throw ConfigError("threads must be >= 0");
  return t == 0 ? default_threads() : static_cast<unsigned>(t);
}

std::vector<std::string> provenance(const RunConfig& c) { return {provenance_line(c.serialize())}; }

NoiseParams noise(const RunConfig& c) { return {c.number("noise_mu"), c.number("noise_sigma"), 0}; }

// Keys shared by several commands.
KeySpec out_key(std::string def) { return {"out", std::move(def), "output directory", KeyKind::path}; }
KeySpec seed_key() { return {"seed", "1", "master seed"}; }
KeySpec threads_key() { return {"threads", "0", "worker threads, 0 = all cores"}; }
KeySpec model_key() { return {"model", "", "model file from `train`", KeyKind::path}; }
std::vector<KeySpec> noise_keys() {
  return {{"noise_mu", "30", "background mean"},
          {"noise_sigma", "8", "background standard deviation"},
          {"psf_sigma", std::to_string(kDefaultPsfSigma), "PSF standard deviation in pixels"}};
}

template <class... Lists>
std::vector<KeySpec> join(std::vector<KeySpec> first, const Lists&... rest) {
  (first.insert(first.end(), rest.begin(), rest.end()), ...);
  return first;
}

DatasetConfig dataset_config(const RunConfig& c) {
  DatasetConfig d;
  d.frame_width = c.integer("width");
  d.frame_height = c.integer("height");
  d.noise_mu = c.number("noise_mu");
  d.noise_sigma = c.number("noise_sigma");
  d.psf_sigma = c.number("psf_sigma");
  d.psnr_target = c.number("psnr");
  d.length_min = c.number("length_min");
  d.length_max = c.number("length_max");
  d.angle_min = c.number("angle_min");
  d.angle_max = c.number("angle_max");
  d.keep_samples = false;
  return d;
}

TrialSpec trial_spec(const RunConfig& c) {
  TrialSpec t;
  t.width = c.integer("width");
  t.height = c.integer("height");
  t.psnr = c.number("psnr");
  t.length = c.number("length");
  t.noise_mu = c.number("noise_mu");
  t.noise_sigma = c.number("noise_sigma");
  t.psf_sigma = c.number("psf_sigma");
  if (!c.text("angle").empty()) t.angle_deg = c.number("angle");
  return t;
}

PipelineConfig pipeline(const RunConfig& c) {
  PipelineConfig p;
  p.min_size = c.integer("t_h");
  p.growth.max_growth = c.integer("l_max");
  return p;
}

}  // namespace

void cmd_simulate(const RunConfig& c, std::ostream& out) {
  const fs::path dir = output_dir(c);
  const DatasetConfig dc = dataset_config(c);
  dc.validate();
  const int n = c.integer("n");
  if (n < 0) throw ConfigError("n must be >= 0");
  const std::uint64_t seed = c.seed("seed");
  const bool single = !c.text("sample_seed").empty();

  std::ofstream manifest(dir / "manifest.csv");
  manifest << "# " << provenance(c)[0] << '\n'
           << "index,seed,center_x,center_y,angle_deg,length,intensity,psnr,frame,mask\n";
  const int frames = single ? 1 : n;
  for (int i = 0; i < frames; ++i) {
    const std::uint64_t s = single ? c.seed("sample_seed") : split_seed(seed, static_cast<std::uint64_t>(i));
    const LabeledSample sample = simulate_sample(dc, s);
    const std::string frame = indexed("frame", i, ".pgm"), mask = indexed("mask", i, ".pgm");
    save_pgm(sample.frame, dir / frame);
    save_mask(sample.ideal_mask, dir / mask);
    manifest << i << ',' << s << ',' << format_double(sample.streak.center.x) << ','
             << format_double(sample.streak.center.y) << ',' << format_double(sample.streak.angle_deg) << ','
             << format_double(sample.streak.length) << ',' << format_double(sample.streak.intensity) << ','
             << format_double(sample.psnr) << ',' << frame << ',' << mask << '\n';
  }
  if (!manifest) throw IoError("cannot write " + (dir / "manifest.csv").string());

  const int rows = c.integer("rows");
  if (rows > 0) {
    const Dataset d = generate_dataset_rows(static_cast<std::size_t>(rows), dc, seed);
    write_rows_csv(d.rows, dir / "dataset.csv", provenance(c));
    out << "wrote " << d.rows.size() << " training rows\n";
  }
  c.save(dir / "run.cfg", "simulate");
  out << "wrote " << frames << " frames to " << dir.string() << '\n';
}

void cmd_train(const RunConfig& c, std::ostream& out) {
  const std::vector<TrainingRow> rows = read_rows_csv(required_path(c, "dataset"));
  const fs::path dir = output_dir(c);
  TrainConfig tc;
  tc.c = c.number("c");
  tc.epochs = c.integer("epochs");
  tc.seed = c.seed("seed");
  tc.average_from = c.number("average_from");
  tc.threshold = c.number("threshold");

  const LinearModel model = train(rows, tc);
  save_model(model, dir / "model.txt");
  write_weight_heatmap(model, dir / "weights.csv", provenance(c));
  const OperatingPoint op = operating_point(model, rows);
  out << "training accuracy " << accuracy(model, rows) << ", fpr " << op.fpr << ", tpr " << op.tpr << '\n';

  const int folds = c.integer("folds");
  if (folds > 0) {
    const KFoldReport r = kfold_validate(rows, folds, tc);
    std::ofstream f(dir / "folds.csv");
    f << "# " << provenance(c)[0] << "\nfold,accuracy_percent\n";
    for (std::size_t i = 0; i < r.accuracies.size(); ++i) f << i + 1 << ',' << format_double(r.accuracies[i]) << '\n';
    f << "mean," << format_double(r.mean) << '\n';
    if (!f) throw IoError("cannot write " + (dir / "folds.csv").string());
    out << folds << "-fold mean accuracy " << r.mean << "%\n";
  }
  c.save(dir / "run.cfg", "train");
}

void cmd_detect(const RunConfig& c, std::ostream& out) {
  const fs::path frame_path = required_path(c, "frame"), model_path = required_path(c, "model");
  const Frame frame = load_pgm(frame_path);
  const LinearModel model = load_model(model_path);
  const fs::path dir = output_dir(c);
  const PipelineConfig p = pipeline(c);

  const std::vector<Component> crude = crude_classify(frame, model, p.min_size, threads(c));
  std::vector<Component> final_components = crude;
  if (!c.flag("no_growth")) {
    const auto results = refine(frame, crude, background_stats(frame), p.growth);
    final_components.clear();
    for (const auto& r : results) final_components.push_back(r.component);
    write_detections_csv(results, dir / "detections.csv", provenance(c));
  }
  write_components_csv(final_components, dir / "components.csv", provenance(c));
  save_mask(components_mask(frame.width(), frame.height(), final_components), dir / "mask.pgm");
  c.save(dir / "run.cfg", "detect");
  out << final_components.size() << " components\n";
}

void cmd_sweep(const RunConfig& c, std::ostream& out) {
  const LinearModel model = load_model(required_path(c, "model"));
  const fs::path dir = output_dir(c);
  SweepConfig s;
  s.kind = parse_sweep_kind(c.text("kind"));
  s.grid = c.numbers("grid");
  s.trials = c.integer("trials");
  s.methods.clear();
  for (const auto& m : c.words("methods")) s.methods.push_back(parse_method(m));
  s.base = trial_spec(c);
  s.pipeline = pipeline(c);
  s.seed = c.seed("seed");
  s.threads = threads(c);

  DirectionalBank bank;
  const bool with_baseline = std::find(s.methods.begin(), s.methods.end(), Method::baseline) != s.methods.end();
  if (with_baseline) {
    bank = build_bank(kDefaultKernelSize, kDefaultBankSize, s.base.psf_sigma);
    s.pipeline.baseline.response_threshold = calibrate_response_threshold(bank, noise(c));
  }
  const auto rows = run_sweep(s, model, with_baseline ? &bank : nullptr);
  write_metric_rows_csv(rows, dir / "rows.csv", provenance(c));
  const auto summary = summarize(rows, s.kind);
  write_summary_csv(summary, s.kind, dir / "summary.csv", provenance(c));
  c.save(dir / "run.cfg", "sweep");
  for (const auto& r : summary)
    out << to_string(s.kind) << '=' << r.value << ' ' << to_string(r.method) << ": detection " << r.detection_rate
        << ", centroid error " << r.mean_centroid_error << ", iou " << r.mean_iou << '\n';
}

void cmd_bench(const RunConfig& c, std::ostream& out) {
  const LinearModel model = load_model(required_path(c, "model"));
  const fs::path dir = output_dir(c);
  BenchmarkConfig b;
  b.width = c.integer("width");
  b.height = c.integer("height");
  b.repetitions = c.integer("reps");
  b.warmup = c.integer("warmup");
  b.psnr = c.number("psnr");
  b.length = c.number("length");
  b.streaks = c.integer("streaks");
  b.frames = c.integer("frames");
  b.seed = c.seed("seed");
  b.pipeline = pipeline(c);

  DirectionalBank bank;
  const bool with_baseline = c.flag("baseline");
  if (with_baseline) {
    bank = build_bank();
    b.pipeline.baseline.response_threshold = calibrate_response_threshold(bank, {30.0, 8.0, 0});
  }
  const BenchmarkReport r = benchmark(b, model, with_baseline ? &bank : nullptr);
  std::ofstream f(dir / "bench.csv");
  f << "# " << provenance(c)[0] << "\nwidth,height,repetitions,proposed_seconds,baseline_seconds,ratio\n"
    << r.width << ',' << r.height << ',' << r.repetitions << ',' << format_double(r.proposed_seconds) << ','
    << format_double(r.baseline_seconds) << ',' << format_double(r.ratio) << '\n';
  if (!f) throw IoError("cannot write " + (dir / "bench.csv").string());
  c.save(dir / "run.cfg", "bench");
  out << "proposed " << r.proposed_seconds << " s/frame";
  if (with_baseline) out << ", baseline " << r.baseline_seconds << " s/frame, ratio " << r.ratio;
  out << '\n';
}

void cmd_analyze(const RunConfig& c, std::ostream& out) {
  const fs::path dir = output_dir(c);
  AnalysisParams p = AnalysisParams::from_psnr(c.number("psnr"), c.number("angle"),
                                               {c.number("noise_mu"), c.number("noise_sigma")}, c.number("psf_sigma"));
  p.background_features = c.integer("background_features");
  if (!c.text("model").empty()) {
    const LinearModel m = load_model(c.path("model"));
    p.weights = m.weights;
    p.bias = m.bias;
  }
  p.validate();

  write_density_csv(feature_densities(p, c.integer("points")), dir / "densities.csv", provenance(c));
  const auto samples = max_gray_samples(p, static_cast<std::size_t>(c.integer("samples")), c.seed("seed"));
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  write_density_csv(histogram_density(samples, std::floor(*lo), std::ceil(*hi), 100, "max_gray_mc"),
                    dir / "max_gray_mc.csv", provenance(c));

  const SubregionDistributions d = subregion_distributions(p);
  const Gaussian a1 = weighted_sum_distribution(p);
  const double ks = ks_statistic(samples, [&](double g) { return max_gray_cdf(p, g); });
  std::ofstream f(dir / "summary.csv");
  f << "# " << provenance(c)[0] << "\nquantity,value\n"
    << "background_mean_mu," << format_double(d.background.mu) << '\n'
    << "background_mean_sigma," << format_double(d.background.sigma) << '\n'
    << "target_mean_mu," << format_double(d.target.mu) << '\n'
    << "target_mean_sigma," << format_double(d.target.sigma) << '\n'
    << "a1_mu," << format_double(a1.mu) << '\n'
    << "a1_sigma," << format_double(a1.sigma) << '\n'
    << "max_gray_ks," << format_double(ks) << '\n';
  if (!f) throw IoError("cannot write " + (dir / "summary.csv").string());
  c.save(dir / "run.cfg", "analyze");
  out << "target mean N(" << d.target.mu << ", " << d.target.sigma << "), max-gray KS " << ks << '\n';
}

const std::vector<Command>& commands() {
  static const std::vector<Command> table = [] {
    const std::vector<KeySpec> pipeline_keys{
        {"t_h", std::to_string(kDefaultMinComponentSize), "minimum component size"},
        {"l_max", "10", "maximum growth per direction"}};
    const std::vector<KeySpec> trial_keys{{"width", "64", "frame width"},
                                          {"height", "64", "frame height"},
                                          {"psnr", "2", "streak PSNR"},
                                          {"length", "16", "streak length in pixels"},
                                          {"angle", "", "axis angle in degrees, empty = uniform"}};
    std::vector<Command> t;
    t.push_back({"simulate", "Simulate labeled frames and, optionally, training rows",
                 join({out_key("sim"), seed_key(),
                       {"n", "1", "number of frames"},
                       {"sample_seed", "", "regenerate the single frame with this manifest seed"},
                       {"rows", "0", "also write at least this many training rows to dataset.csv"},
                       {"width", "128", "frame width"},
                       {"height", "128", "frame height"},
                       {"psnr", "2", "streak PSNR"},
                       {"length_min", "10", "shortest streak"},
                       {"length_max", "22", "longest streak"},
                       {"angle_min", "0", "smallest axis angle"},
                       {"angle_max", "180", "largest axis angle"}},
                      noise_keys()),
                 cmd_simulate});
    t.push_back({"train", "Train the pixel classifier from a training-row CSV",
                 {out_key("model"),
                  seed_key(),
                  {"dataset", "", "training rows from `simulate rows=N`", KeyKind::path},
                  {"c", "0.01", "regularization weight"},
                  {"epochs", "20", "passes over the data"},
                  {"average_from", "0.5", "fraction of steps before iterate averaging starts"},
                  {"threshold", "0.5", "decision threshold"},
                  {"folds", "5", "k-fold validation folds, 0 = skip"}},
                 cmd_train});
    t.push_back({"detect", "Detect streaks in one PGM frame",
                 join({out_key("detect"),
                       model_key(),
                       threads_key(),
                       {"frame", "", "8-bit PGM input", KeyKind::path},
                       {"no_growth", "false", "stop after crude classification", KeyKind::flag}},
                      pipeline_keys),
                 cmd_detect});
    t.push_back({"sweep", "Monte-Carlo metric sweep",
                 join({out_key("sweep"),
                       model_key(),
                       seed_key(),
                       threads_key(),
                       {"kind", "psnr", "psnr, length or noise_sigma"},
                       {"grid", "2,3,4,5", "comma-separated grid values"},
                       {"trials", "200", "trials per grid point"},
                       {"methods", "crude,grown", "comma-separated subset of crude, grown, baseline"}},
                      trial_keys, noise_keys(), pipeline_keys),
                 cmd_sweep});
    t.push_back({"bench", "Single-threaded runtime of the pipeline and the baseline",
                 join({out_key("bench"),
                       model_key(),
                       seed_key(),
                       {"width", "1280", "frame width"},
                       {"height", "960", "frame height"},
                       {"reps", "150", "timed repetitions"},
                       {"warmup", "1", "untimed repetitions"},
                       {"psnr", "3", "streak PSNR"},
                       {"length", "20", "streak length"},
                       {"streaks", "4", "streaks per frame"},
                       {"frames", "3", "distinct frames"},
                       {"baseline", "true", "also time the baseline"}},
                      pipeline_keys),
                 cmd_bench});
    t.push_back({"analyze", "Template capability analysis tables",
                 join({out_key("analysis"),
                       seed_key(),
                       {"model", "", "optional model whose weights enter A1", KeyKind::path},
                       {"psnr", "2", "streak PSNR"},
                       {"angle", "30", "axis angle in degrees"},
                       {"background_features", std::to_string(kTileCount - 1), "background-only sub-regions"},
                       {"points", "801", "density grid points"},
                       {"samples", "100000", "Monte-Carlo draws of the maximum gray"}},
                      noise_keys()),
                 cmd_analyze});
    return t;
  }();
  return table;
}

namespace {

std::string flag_name(const std::string& key) {
  std::string f = "--" + key;
  std::replace(f.begin(), f.end(), '_', '-');
  return f;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Faint streak detection toolkit", "streaklite"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  struct Parsed {
    std::string config;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::map<std::string, Parsed> parsed;
  for (const Command& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
    Parsed& p = parsed[cmd.name];
    sub->add_option("--config", p.config, "key=value file; flags override its values");
    for (const KeySpec& k : cmd.keys) {
      const std::string help = k.help + (k.default_value.empty() ? "" : " (default " + k.default_value + ")");
      if (k.kind == KeyKind::flag) {
        p.options[k.name] = sub->add_flag(flag_name(k.name), help);
      } else {
        p.options[k.name] = sub->add_option(flag_name(k.name), p.values[k.name], help);
      }
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  const Command* cmd = nullptr;
  for (const Command& c : commands())
    if (app.got_subcommand(c.name)) cmd = &c;
  if (cmd == nullptr) {
    err << "no command given\n";
    return kExitConfig;
  }

  try {
    RunConfig config(cmd->keys);
    Parsed& p = parsed[cmd->name];
    if (!p.config.empty()) config.merge_file(p.config);
    for (const KeySpec& k : cmd->keys) {
      CLI::Option* opt = p.options[k.name];
      if (opt->count() == 0) continue;
      config.set(k.name, k.kind == KeyKind::flag ? "true" : p.values[k.name]);
    }
    config.resolve_paths();
    cmd->run(config, out);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace streaklite::cli
