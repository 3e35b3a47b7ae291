#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "snr4d/errors.hpp"
#include "snr4d/link.hpp"

namespace snr4d {

using IniData = std::map<std::string, std::map<std::string, std::string>>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& where, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError(where + ": cannot parse number '" + value + "'");
  return v;
}

inline int parse_int(const std::string& where, const std::string& value) {
  const double v = parse_double(where, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw ConfigError(where + ": expected an integer, got '" + value + "'");
  return i;
}

}  // namespace detail

// Minimal INI reader: [section] headers, key = value lines, '#' and ';'
// comment lines.
inline IniData parse_ini(std::istream& in, const std::string& origin) {
  IniData data;
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + ": malformed section header");
      section = detail::trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      data[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value = detail::trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (section.empty()) throw ConfigError(where + ": key outside any section");
    data[section][key] = value;
  }
  return data;
}

// Applies one "section.key" assignment onto a LinkConfig. Field names match
// the struct members one for one.
inline void apply_config_value(LinkConfig& link, const std::string& section,
                               const std::string& key, const std::string& value) {
  const std::string where = section + "." + key;
  if (section == "fiber") {
    if (key == "alpha_db_per_km") link.fiber.alpha_db_per_km = detail::parse_double(where, value);
    else if (key == "beta2_ps2_per_km") link.fiber.beta2_ps2_per_km = detail::parse_double(where, value);
    else if (key == "gamma_per_w_km") link.fiber.gamma_per_w_km = detail::parse_double(where, value);
    else if (key == "span_length_km") link.fiber.span_length_km = detail::parse_double(where, value);
    else throw ConfigError("unknown key " + where);
  } else if (section == "amplifier") {
    if (key == "noise_figure_db") link.amp.noise_figure_db = detail::parse_double(where, value);
    else if (key == "center_frequency_hz") link.amp.center_frequency_hz = detail::parse_double(where, value);
    else throw ConfigError("unknown key " + where);
  } else if (section == "signal") {
    if (key == "symbol_rate_baud") link.signal.symbol_rate_baud = detail::parse_double(where, value);
    else if (key == "rrc_rolloff") link.signal.rrc_rolloff = detail::parse_double(where, value);
    else if (key == "launch_power_dbm") link.signal.launch_power_dbm = detail::parse_double(where, value);
    else throw ConfigError("unknown key " + where);
  } else if (section == "link") {
    if (key == "n_spans") link.n_spans = detail::parse_int(where, value);
    else throw ConfigError("unknown key " + where);
  } else {
    throw ConfigError("unknown section [" + section + "]");
  }
}

inline LinkConfig link_config_from_ini(const IniData& data) {
  LinkConfig link;
  for (const auto& [section, kv] : data)
    for (const auto& [key, value] : kv) apply_config_value(link, section, key, value);
  validate(link);
  return link;
}

inline LinkConfig load_link_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return link_config_from_ini(parse_ini(in, path.string()));
}

// Overrides in "section.key=value" form; they always win over file values.
inline void apply_overrides(LinkConfig& link, const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    const auto dot = item.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      throw ConfigError("override '" + item + "' is not of the form section.key=value");
    apply_config_value(link, detail::trim(item.substr(0, dot)),
                       detail::trim(item.substr(dot + 1, eq - dot - 1)),
                       detail::trim(item.substr(eq + 1)));
  }
  validate(link);
}

// Canonical one-line-per-field rendering; feeds the config hash recorded in
// CSV metadata.
inline std::string canonical_config_string(const LinkConfig& link) {
  std::ostringstream os;
  os.precision(17);
  os << "fiber.alpha_db_per_km=" << link.fiber.alpha_db_per_km << '\n'
     << "fiber.beta2_ps2_per_km=" << link.fiber.beta2_ps2_per_km << '\n'
     << "fiber.gamma_per_w_km=" << link.fiber.gamma_per_w_km << '\n'
     << "fiber.span_length_km=" << link.fiber.span_length_km << '\n'
     << "amplifier.noise_figure_db=" << link.amp.noise_figure_db << '\n'
     << "amplifier.center_frequency_hz=" << link.amp.center_frequency_hz << '\n'
     << "signal.symbol_rate_baud=" << link.signal.symbol_rate_baud << '\n'
     << "signal.rrc_rolloff=" << link.signal.rrc_rolloff << '\n'
     << "signal.launch_power_dbm=" << link.signal.launch_power_dbm << '\n'
     << "link.n_spans=" << link.n_spans << '\n';
  return os.str();
}

}  // namespace snr4d
