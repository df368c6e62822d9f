#pragma once

// Flat key=value run configuration shared by every subcommand. Each key has
// a matching --flag; flags override values read from --config.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace streaklite::cli {

/// Bad flags, unknown keys or unparsable values. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class KeyKind { value, path, flag };

struct KeySpec {
  std::string name;
  std::string default_value;
  std::string help;
  KeyKind kind = KeyKind::value;
};

class RunConfig {
 public:
  RunConfig() = default;
  /// Starts from the defaults of `keys`; only those keys are accepted later.
  explicit RunConfig(std::span<const KeySpec> keys);

  /// Applies "key = value" lines from `path`. Blank lines and lines starting
  /// with '#' are skipped. Unknown keys throw ConfigError; a missing file
  /// throws IoError.
  void merge_file(const std::filesystem::path& path);
  /// Throws ConfigError for keys not declared at construction.
  void set(const std::string& key, const std::string& value);

  /// Path keys become absolute; empty paths stay empty.
  void resolve_paths();

  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t seed(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::filesystem::path path(const std::string& key) const;
  /// Comma-separated list of doubles.
  std::vector<double> numbers(const std::string& key) const;
  /// Comma-separated list of words.
  std::vector<std::string> words(const std::string& key) const;

  /// One "key=value" line per key in key order.
  std::string serialize() const;
  /// serialize() under a "# streaklite <version> <command>" line.
  void save(const std::filesystem::path& path, const std::string& command) const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, KeyKind> kinds_;
};

}  // namespace streaklite::cli
