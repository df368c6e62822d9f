#include "run_config.hpp"

#include <charconv>
#include <fstream>

#include "streaklite/csv.hpp"
#include "streaklite/error.hpp"

namespace streaklite::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw ConfigError("key '" + key + "': expected " + what + ", got '" + value + "'");
}

}  // namespace

RunConfig::RunConfig(std::span<const KeySpec> keys) {
  for (const auto& k : keys) {
    values_[k.name] = k.default_value;
    kinds_[k.name] = k.kind;
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key=value");
    set(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second = value;
}

void RunConfig::resolve_paths() {
  for (auto& [key, value] : values_)
    if (kinds_.at(key) == KeyKind::path && !value.empty())
      value = std::filesystem::absolute(value).lexically_normal().string();
}

const std::string& RunConfig::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InvariantError("undeclared config key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string& key) const {
  const std::string& v = text(key);
  try {
    return parse_double(v);
  } catch (const IoError&) {
    bad_value(key, v, "a number");
  }
}

int RunConfig::integer(const std::string& key) const {
  const std::string& v = text(key);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

std::uint64_t RunConfig::seed(const std::string& key) const {
  const std::string& v = text(key);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "an unsigned 64-bit seed");
  return out;
}

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = text(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0" || v.empty()) return false;
  bad_value(key, v, "true or false");
}

std::filesystem::path RunConfig::path(const std::string& key) const { return text(key); }

std::vector<double> RunConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& w : words(key)) {
    try {
      out.push_back(parse_double(w));
    } catch (const IoError&) {
      bad_value(key, text(key), "a comma-separated list of numbers");
    }
  }
  return out;
}

std::vector<std::string> RunConfig::words(const std::string& key) const {
  std::vector<std::string> out;
  if (text(key).empty()) return out;
  for (const auto& w : split_csv_line(text(key))) out.push_back(trim(w));
  return out;
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& [key, value] : values_) out += key + "=" + value + "\n";
  return out;
}

void RunConfig::save(const std::filesystem::path& path, const std::string& command) const {
  std::ofstream out(path);
  out << "# streaklite " << kVersion << ' ' << command << '\n' << serialize();
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace streaklite::cli
