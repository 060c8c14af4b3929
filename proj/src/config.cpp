#include "wayref/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "wayref/errors.hpp"

namespace wayref {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  return parse(in);
}

Config Config::parse(std::istream& in) {
  Config c;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", number);
    const auto key = trim(v.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", number);
    c.set(std::string(key), std::string(trim(v.substr(eq + 1))));
  }
  return c;
}

std::optional<std::string> Config::raw(std::string_view key) const {
  const auto it = values_.find(std::string(key));
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(std::string_view key, std::string fallback) const {
  return raw(key).value_or(std::move(fallback));
}

double Config::get_double(std::string_view key, double fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size())
    throw ValidationError("config key '" + std::string(key) + "' expects a number, got '" + *v + "'");
  return out;
}

long long Config::get_int(std::string_view key, long long fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size())
    throw ValidationError("config key '" + std::string(key) + "' expects an integer, got '" + *v + "'");
  return out;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ValidationError("config key '" + std::string(key) + "' expects true/false, got '" + *v + "'");
}

std::string to_text(const Config& c) {
  std::ostringstream out;
  for (const auto& [k, v] : c.values()) out << k << " = " << v << '\n';
  return out.str();
}

}  // namespace wayref
