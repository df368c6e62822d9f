#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "streaklite/classifier.hpp"
#include "streaklite/frame.hpp"

namespace streaklite::testing {

/// Model trained once per process on ~20k rows of the default recipe.
/// Small enough for unit tests, large enough to detect PSNR-2 streaks.
const LinearModel& small_model();

/// Deletes itself on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Uniform gray levels in [lo, hi).
Frame uniform_frame(int width, int height, double lo, double hi, std::uint64_t seed);

/// Each pixel set independently with probability `density`.
BinaryMap random_map(int width, int height, double density, std::uint64_t seed);

std::string read_file(const std::filesystem::path& path);

inline std::filesystem::path data_dir() { return STREAKLITE_TEST_DATA; }

}  // namespace streaklite::testing
