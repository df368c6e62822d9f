#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace streaklite {

inline constexpr std::string_view kVersion = "0.1.0";

/// 17-significant-digit text that round-trips `v` ("nan"/"inf" for non-finite values).
std::string format_double(double v);

/// Parses a double; throws IoError on malformed text.
double parse_double(std::string_view text);

/// Splits on commas. No quoting: none of the files written here need it.
std::vector<std::string> split_csv_line(std::string_view line);

/// 64-bit FNV-1a, used to fingerprint configurations.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// "streaklite <version> config=<16 hex digits>", written as the first
/// comment line of every CSV output.
std::string provenance_line(std::string_view config_text);

}  // namespace streaklite
