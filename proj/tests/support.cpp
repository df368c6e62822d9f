#include "support.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

#include "streaklite/dataset.hpp"
#include "streaklite/rng.hpp"

namespace streaklite::testing {

const LinearModel& small_model() {
  static const LinearModel model = [] {
    DatasetConfig config;
    config.keep_samples = false;
    const Dataset data = generate_dataset_rows(20000, config, 7);
    return train(data.rows, TrainConfig{});
  }();
  return model;
}

TempDir::TempDir(const std::string& tag) {
  static int counter = 0;
  path_ = std::filesystem::temp_directory_path() /
          ("streaklite-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Frame uniform_frame(int width, int height, double lo, double hi, std::uint64_t seed) {
  Frame f(width, height);
  Rng rng(seed);
  for (double& g : f.pixels()) g = rng.uniform(lo, hi);
  return f;
}

BinaryMap random_map(int width, int height, double density, std::uint64_t seed) {
  BinaryMap m(width, height);
  Rng rng(seed);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) m.set(x, y, rng.uniform() < density);
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace streaklite::testing
