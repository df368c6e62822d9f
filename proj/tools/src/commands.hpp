#pragma once

// Subcommands of the streaklite tool. Every command writes its effective
// configuration to <out>/run.cfg, which reproduces the run when passed back
// through --config.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace streaklite::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInvariant = 4;

struct Command {
  std::string name;
  std::string description;
  std::vector<KeySpec> keys;
  std::function<void(const RunConfig&, std::ostream&)> run;
};

const std::vector<Command>& commands();

/// Frames, ideal masks and a manifest; optionally a training-row CSV.
void cmd_simulate(const RunConfig& config, std::ostream& out);
/// Model file, weight heat map and k-fold report from a training-row CSV.
void cmd_train(const RunConfig& config, std::ostream& out);
/// Component CSV and mask PGM for one frame.
void cmd_detect(const RunConfig& config, std::ostream& out);
/// Metric rows and per-grid-point summary.
void cmd_sweep(const RunConfig& config, std::ostream& out);
/// Timing report of the proposed pipeline against the baseline.
void cmd_bench(const RunConfig& config, std::ostream& out);
/// Density and CDF tables of the template analysis.
void cmd_analyze(const RunConfig& config, std::ostream& out);

/// Parses `args` (without the program name), runs the selected command and
/// maps failures to exit codes. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streaklite::cli
