#include "streaklite/detector.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "streaklite/csv.hpp"
#include "streaklite/error.hpp"
#include "streaklite/features.hpp"
#include "streaklite/parallel.hpp"

namespace streaklite {

Component::Box Component::bounding_box() const {
  if (pixels.empty()) throw std::logic_error("bounding box of an empty component");
  Box b{pixels.front().x, pixels.front().y, pixels.front().x, pixels.front().y};
  for (const Pixel& p : pixels) {
    b.x0 = std::min(b.x0, p.x);
    b.x1 = std::max(b.x1, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

bool Component::contains(Pixel p) const { return std::binary_search(pixels.begin(), pixels.end(), p); }

BinaryMap classify_frame(const Frame& frame, const LinearModel& model, unsigned threads) {
  if (frame.width() < kTemplateSize || frame.height() < kTemplateSize) {
    throw std::invalid_argument("frame must be at least 25x25 to classify");
  }
  const FeatureField field(frame);
  BinaryMap map(frame.width(), frame.height());
  const int y_begin = kTemplateRadius;
  const int y_end = frame.height() - kTemplateRadius;
  // Rows are independent; each worker writes disjoint rows.
  parallel_for(static_cast<std::size_t>(y_end - y_begin), threads, [&](std::size_t i) {
    const int y = y_begin + static_cast<int>(i);
    for (int x = kTemplateRadius; x < frame.width() - kTemplateRadius; ++x) {
      if (predict(model, field.at(x, y))) map.set(x, y);
    }
  });
  return map;
}

std::vector<Component> connected_components(const BinaryMap& map) {
  const int w = map.width();
  const int h = map.height();
  // Two-pass labeling with union-find over provisional labels.
  std::vector<int> labels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  std::vector<int> parent{0};
  auto find = [&parent](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  auto label_at = [&](int x, int y) {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)];
  };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!map.at(x, y)) continue;
      int current = 0;
      const int neighbors[4][2] = {{x - 1, y}, {x - 1, y - 1}, {x, y - 1}, {x + 1, y - 1}};
      for (const auto& n : neighbors) {
        if (n[0] < 0 || n[1] < 0 || n[0] >= w) continue;
        const int l = label_at(n[0], n[1]);
        if (l == 0) continue;
        if (current == 0) {
          current = l;
        } else {
          unite(current, l);
        }
      }
      if (current == 0) {
        current = static_cast<int>(parent.size());
        parent.push_back(current);
      }
      labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] = current;
    }
  }

  // Roots are the smallest provisional label of each set, and provisional
  // labels are issued in raster order, so root order = first-pixel order.
  std::vector<int> slot(parent.size(), -1);
  std::vector<Component> out;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int l = label_at(x, y);
      if (l == 0) continue;
      const int root = find(l);
      if (slot[root] < 0) {
        slot[root] = static_cast<int>(out.size());
        out.emplace_back();
      }
      out[static_cast<std::size_t>(slot[root])].pixels.push_back({x, y});
    }
  }
  return out;
}

std::vector<Component> filter_components(std::vector<Component> components, int min_size) {
  if (min_size < 1) throw std::invalid_argument("minimum component size must be at least 1");
  std::erase_if(components, [min_size](const Component& c) { return c.size() < static_cast<std::size_t>(min_size); });
  return components;
}

std::vector<Component> crude_classify(const Frame& frame, const LinearModel& model, int min_size, unsigned threads) {
  return filter_components(connected_components(classify_frame(frame, model, threads)), min_size);
}

BinaryMap components_mask(int width, int height, const std::vector<Component>& components) {
  BinaryMap map(width, height);
  for (const auto& c : components)
    for (const Pixel& p : c.pixels) map.set(p);
  return map;
}

std::string run_length_encode(const Component& component) {
  std::ostringstream out;
  bool first = true;
  const auto& px = component.pixels;
  for (std::size_t i = 0; i < px.size();) {
    std::size_t j = i + 1;
    while (j < px.size() && px[j].y == px[i].y && px[j].x == px[j - 1].x + 1) ++j;
    if (!first) out << ';';
    out << px[i].y << ':' << px[i].x << ':' << (j - i);
    first = false;
    i = j;
  }
  return out.str();
}

Component run_length_decode(const std::string& text) {
  Component c;
  std::istringstream in(text);
  std::string run;
  while (std::getline(in, run, ';')) {
    int y = 0, x = 0, len = 0;
    char sep1 = 0, sep2 = 0;
    std::istringstream rs(run);
    if (!(rs >> y >> sep1 >> x >> sep2 >> len) || sep1 != ':' || sep2 != ':' || len < 1) {
      throw IoError("malformed run '" + run + "'");
    }
    for (int k = 0; k < len; ++k) c.pixels.push_back({x + k, y});
  }
  std::sort(c.pixels.begin(), c.pixels.end());
  return c;
}

void write_components_csv(const std::vector<Component>& components, const std::filesystem::path& path,
                          const std::vector<std::string>& comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& c : comment) out << "# " << c << '\n';
  out << "id,size,x0,y0,x1,y1,rle\n";
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto b = components[i].bounding_box();
    out << i << ',' << components[i].size() << ',' << b.x0 << ',' << b.y0 << ',' << b.x1 << ',' << b.y1 << ','
        << run_length_encode(components[i]) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace streaklite
