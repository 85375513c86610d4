#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "soak/channel.hpp"
#include "soak/errors.hpp"
#include "soak/montecarlo.hpp"
#include "soak/secrecy.hpp"

// =============================================================================
/// @file config.hpp
/// @brief Flat key=value settings for the simulation commands and the parsers
///        shared by every CLI flag that takes a list or grid.
// =============================================================================

namespace soak {

/// Simulation settings with the reference defaults: 10 channels at budget
/// 0.1, fading variances 0.6 / 0.3, uncertainty split 0.3 / 0.09, and
/// rs0 = rs0_factor * P * sigma_m2 / (2 ln 2) with rs0_factor 0.625.
struct SimSettings {
  std::size_t n = 10;
  double p_budget = 0.1;
  double rs0_factor = 0.625;
  std::optional<double> rs0;  ///< explicit rate; overrides rs0_factor
  double sigma_m2 = 0.6;
  double sigma_e2 = 0.3;
  double eps2_high = 0.3;
  double eps2_low = 0.09;
  std::size_t outer = 10000;
  std::size_t inner = 10000;
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes = all_schemes();
  EventMode event_mode = EventMode::bound_event;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, const char* what) {
  const std::string_view t = trim(text);
  T value{};
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ParseError(std::string("cannot parse ") + what + " from '" +
                     std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

inline double parse_double(std::string_view text, const char* what = "number") {
  return detail::parse_number<double>(text, what);
}

inline std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(sep, start);
    const auto end = pos == std::string_view::npos ? text.size() : pos;
    parts.emplace_back(detail::trim(text.substr(start, end - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

/// Comma-separated doubles; every entry must parse.
inline std::vector<double> parse_value_list(std::string_view text) {
  std::vector<double> values;
  for (const auto& part : split_list(text, ',')) {
    values.push_back(parse_double(part, "list entry"));
  }
  if (values.empty()) throw ParseError("empty value list");
  return values;
}

/// Either a comma list or a linear grid "start:stop:count".
inline std::vector<double> parse_grid(std::string_view text) {
  if (text.find(':') == std::string_view::npos) return parse_value_list(text);
  const auto parts = split_list(text, ':');
  if (parts.size() != 3) throw ParseError("grid must be start:stop:count");
  const double start = parse_double(parts[0], "grid start");
  const double stop = parse_double(parts[1], "grid stop");
  const auto count = detail::parse_number<std::size_t>(parts[2], "grid count");
  if (count == 0) throw ParseError("grid count must be >= 1");
  std::vector<double> values(count);
  if (count == 1) {
    values[0] = start;
    return values;
  }
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = start + step * static_cast<double>(i);
  }
  values.back() = stop;
  return values;
}

inline Scheme parse_scheme(std::string_view name) {
  for (Scheme s : all_schemes()) {
    if (name == scheme_name(s)) return s;
  }
  throw ParseError("unknown scheme '" + std::string(name) +
                   "' (expected equal, capacity, secrecy, robust)");
}

inline std::vector<Scheme> parse_scheme_list(std::string_view text) {
  std::vector<Scheme> schemes;
  for (const auto& part : split_list(text, ',')) {
    const Scheme s = parse_scheme(part);
    bool seen = false;
    for (Scheme t : schemes) seen = seen || t == s;
    if (!seen) schemes.push_back(s);
  }
  if (schemes.empty()) throw ParseError("empty scheme list");
  return schemes;
}

inline EventMode parse_event_mode(std::string_view text) {
  if (text == "bound_event") return EventMode::bound_event;
  if (text == "exact_rate") return EventMode::exact_rate;
  throw ParseError("unknown event mode '" + std::string(text) +
                   "' (expected bound_event or exact_rate)");
}

inline void apply_setting(SimSettings& settings, std::string_view key,
                          std::string_view value) {
  if (key == "n") {
    settings.n = detail::parse_number<std::size_t>(value, "n");
  } else if (key == "p_budget") {
    settings.p_budget = parse_double(value, "p_budget");
  } else if (key == "rs0_factor") {
    settings.rs0_factor = parse_double(value, "rs0_factor");
  } else if (key == "sigma_m2") {
    settings.sigma_m2 = parse_double(value, "sigma_m2");
  } else if (key == "sigma_e2") {
    settings.sigma_e2 = parse_double(value, "sigma_e2");
  } else if (key == "eps2_high") {
    settings.eps2_high = parse_double(value, "eps2_high");
  } else if (key == "eps2_low") {
    settings.eps2_low = parse_double(value, "eps2_low");
  } else if (key == "outer") {
    settings.outer = detail::parse_number<std::size_t>(value, "outer");
  } else if (key == "inner") {
    settings.inner = detail::parse_number<std::size_t>(value, "inner");
  } else if (key == "seed") {
    settings.seed = detail::parse_number<std::uint64_t>(value, "seed");
  } else if (key == "schemes") {
    settings.schemes = parse_scheme_list(value);
  } else if (key == "event_mode") {
    settings.event_mode = parse_event_mode(value);
  } else {
    throw ParseError("unknown config key '" + std::string(key) + "'");
  }
}

/// key=value lines; '#' starts a comment, blank lines are skipped.
inline SimSettings parse_settings(std::istream& is,
                                  SimSettings settings = SimSettings{}) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) +
                       ": expected key=value");
    }
    apply_setting(settings, detail::trim(body.substr(0, eq)),
                  detail::trim(body.substr(eq + 1)));
  }
  return settings;
}

inline double resolved_rs0(const SimSettings& settings) {
  if (settings.rs0) return *settings.rs0;
  return settings.rs0_factor * settings.p_budget * settings.sigma_m2 /
         (2.0 * std::numbers::ln2);
}

inline FadingEnsemble make_ensemble(const SimSettings& settings) {
  return make_split_ensemble(settings.n, settings.sigma_m2, settings.sigma_e2,
                             settings.eps2_high, settings.eps2_low);
}

inline SimConfig make_sim_config(const SimSettings& settings,
                                 unsigned threads = 0) {
  return SimConfig{make_ensemble(settings),
                   settings.p_budget,
                   TargetRate(resolved_rs0(settings)),
                   settings.outer,
                   settings.inner,
                   settings.seed,
                   settings.schemes,
                   settings.event_mode,
                   false,
                   threads};
}

}  // namespace soak
