#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace wayref {

// Flat `key = value` configuration. '#' starts a comment; blank lines are
// ignored; later keys override earlier ones.
class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(std::istream& in);

  void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }
  bool has(std::string_view key) const { return values_.count(std::string(key)) > 0; }
  std::optional<std::string> raw(std::string_view key) const;

  std::string get_string(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::string to_text(const Config& c);

}  // namespace wayref
