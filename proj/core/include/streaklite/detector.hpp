#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "streaklite/classifier.hpp"
#include "streaklite/frame.hpp"

namespace streaklite {

inline constexpr int kDefaultMinComponentSize = 35;

/// 8-connected pixel set, stored in raster order.
struct Component {
  std::vector<Pixel> pixels;

  struct Box {
    int x0, y0, x1, y1;  // inclusive
  };
  Box bounding_box() const;
  std::size_t size() const noexcept { return pixels.size(); }
  bool contains(Pixel p) const;

  friend bool operator==(const Component&, const Component&) = default;
};

/// Classifies every pixel whose template fits; the 12-pixel border is 0.
/// Throws std::invalid_argument for frames smaller than 25x25.
BinaryMap classify_frame(const Frame& frame, const LinearModel& model, unsigned threads = 1);

/// 8-connected components ordered by their first pixel in raster order.
std::vector<Component> connected_components(const BinaryMap& map);

/// Components with at least `min_size` pixels, order preserved.
std::vector<Component> filter_components(std::vector<Component> components, int min_size = kDefaultMinComponentSize);

std::vector<Component> crude_classify(const Frame& frame, const LinearModel& model,
                                      int min_size = kDefaultMinComponentSize, unsigned threads = 1);

BinaryMap components_mask(int width, int height, const std::vector<Component>& components);

/// "y:x0:len" runs joined by ';'.
std::string run_length_encode(const Component& component);
Component run_length_decode(const std::string& text);

/// id,size,x0,y0,x1,y1,rle
void write_components_csv(const std::vector<Component>& components, const std::filesystem::path& path,
                          const std::vector<std::string>& comment = {});

}  // namespace streaklite
