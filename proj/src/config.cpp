#include "phl/config.hpp"

#include <charconv>

#include <json.hpp>

namespace phl {

std::vector<Rational> Config::default_real_grid() {
  return {Rational(-1), Rational(0), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1), Rational(2)};
}

namespace {

long parse_long(std::string_view s, std::string_view what) {
  long v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw Error("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

IntRange range_from_json(const nlohmann::json& j, std::string_view key) {
  if (j.is_string()) return parse_range(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    return IntRange{j[0].get<long>(), j[1].get<long>()};
  }
  throw Error(std::string(key) + " must be [lo, hi] or \"lo..hi\"");
}

}  // namespace

IntRange parse_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) throw Error("window '" + std::string(text) + "' is not of the form MIN..MAX");
  const IntRange r{parse_long(text.substr(0, dots), "window bound"), parse_long(text.substr(dots + 2), "window bound")};
  if (r.empty()) throw Error("window '" + std::string(text) + "' is empty");
  return r;
}

void Config::merge_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error("config must be a JSON object");
  try {
    if (j.contains("loop_bound")) loop_bound = j.at("loop_bound").get<long>();
    if (j.contains("unroll")) unroll = j.at("unroll").get<int>();
    if (j.contains("depth")) depth = j.at("depth").get<int>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("int_window")) int_window = range_from_json(j.at("int_window"), "int_window");
    if (j.contains("quant_window")) quant_window = range_from_json(j.at("quant_window"), "quant_window");
    if (j.contains("real_grid")) {
      real_grid.clear();
      for (const auto& v : j.at("real_grid")) {
        real_grid.push_back(v.is_string() ? Rational::parse(v.get<std::string>()) : Rational(v.get<long>()));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("config: ") + e.what());
  }
}

void Config::validate() const {
  if (loop_bound < 1 || unroll < 1 || depth < 1) throw Error("loop bound, unroll and depth must be at least 1");
  if (int_window.empty()) throw Error("integer window " + int_window.to_string() + " is empty");
  if (quant_window.empty()) throw Error("quantifier window " + quant_window.to_string() + " is empty");
}

}  // namespace phl
