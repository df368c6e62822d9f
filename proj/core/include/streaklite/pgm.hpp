#pragma once

#include <filesystem>
#include <string>

#include "streaklite/error.hpp"
#include "streaklite/frame.hpp"

namespace streaklite {

/// Reasons a PGM file is rejected.
enum class PgmErrorKind { open_failed, malformed_header, unsupported_bit_depth, truncated_payload, write_failed };

class PgmError : public IoError {
 public:
  PgmError(PgmErrorKind kind, const std::string& what) : IoError(what), kind_(kind) {}
  PgmErrorKind kind() const noexcept { return kind_; }

 private:
  PgmErrorKind kind_;
};

/// Reads an 8-bit (maxval 255) PGM in binary (P5) or ASCII (P2) encoding.
Frame load_pgm(const std::filesystem::path& path);

/// Writes P5 with round-half-up quantization, clamped to [0, 255].
void save_pgm(const Frame& frame, const std::filesystem::path& path);

/// Writes P5 with set pixels as 255 and clear pixels as 0.
void save_mask(const BinaryMap& mask, const std::filesystem::path& path);

/// Gray level written for `g` by save_pgm.
int quantize_gray(double g) noexcept;

}  // namespace streaklite
