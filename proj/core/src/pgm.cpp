#include "streaklite/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <vector>

namespace streaklite {

namespace {

// Skips whitespace and '#' comments between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

long read_header_int(std::istream& in, const std::filesystem::path& path, const char* field) {
  skip_separators(in);
  long value = 0;
  int digits = 0;
  while (std::isdigit(in.peek())) {
    value = value * 10 + (in.get() - '0');
    if (++digits > 9) break;
  }
  if (digits == 0 || digits > 9) {
    throw PgmError(PgmErrorKind::malformed_header,
                   "malformed PGM header in " + path.string() + ": bad " + field);
  }
  return value;
}

void write_p5(const std::filesystem::path& path, int width, int height,
              const std::vector<unsigned char>& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PgmError(PgmErrorKind::write_failed, "cannot open " + path.string() + " for writing");
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!out) throw PgmError(PgmErrorKind::write_failed, "write failed for " + path.string());
}

}  // namespace

int quantize_gray(double g) noexcept {
  const double r = std::floor(g + 0.5);
  if (!(r > 0.0)) return 0;
  if (r > 255.0) return 255;
  return static_cast<int>(r);
}

Frame load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PgmError(PgmErrorKind::open_failed, "cannot open " + path.string());

  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '2')) {
    throw PgmError(PgmErrorKind::malformed_header, "not a P2/P5 PGM file: " + path.string());
  }
  const bool binary = magic[1] == '5';
  const long width = read_header_int(in, path, "width");
  const long height = read_header_int(in, path, "height");
  const long maxval = read_header_int(in, path, "maxval");
  if (width <= 0 || height <= 0) {
    throw PgmError(PgmErrorKind::malformed_header, "non-positive PGM dimensions in " + path.string());
  }
  if (maxval != 255) {
    throw PgmError(PgmErrorKind::unsupported_bit_depth,
                   "unsupported bit depth (maxval " + std::to_string(maxval) + ") in " + path.string());
  }

  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> pixels(n);
  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep)) {
      throw PgmError(PgmErrorKind::malformed_header, "missing raster separator in " + path.string());
    }
    std::vector<unsigned char> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
      throw PgmError(PgmErrorKind::truncated_payload,
                     "truncated PGM payload in " + path.string() + ": expected " + std::to_string(n) +
                         " bytes, got " + std::to_string(in.gcount()));
    }
    for (std::size_t i = 0; i < n; ++i) pixels[i] = raw[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      skip_separators(in);
      if (in.peek() == EOF) {
        throw PgmError(PgmErrorKind::truncated_payload,
                       "truncated PGM payload in " + path.string() + ": got " + std::to_string(i) +
                           " of " + std::to_string(n) + " samples");
      }
      long v = 0;
      int digits = 0;
      while (std::isdigit(in.peek())) {
        v = v * 10 + (in.get() - '0');
        ++digits;
      }
      if (digits == 0 || v > 255) {
        throw PgmError(PgmErrorKind::malformed_header, "bad ASCII sample in " + path.string());
      }
      pixels[i] = static_cast<double>(v);
    }
  }
  return Frame(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

void save_pgm(const Frame& frame, const std::filesystem::path& path) {
  std::vector<unsigned char> payload(frame.size());
  auto px = frame.pixels();
  for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<unsigned char>(quantize_gray(px[i]));
  write_p5(path, frame.width(), frame.height(), payload);
}

void save_mask(const BinaryMap& mask, const std::filesystem::path& path) {
  std::vector<unsigned char> payload;
  payload.reserve(static_cast<std::size_t>(mask.width()) * static_cast<std::size_t>(mask.height()));
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) payload.push_back(mask.at(x, y) ? 255 : 0);
  write_p5(path, mask.width(), mask.height(), payload);
}

}  // namespace streaklite
