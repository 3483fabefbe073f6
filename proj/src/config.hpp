#ifndef RAUZY_CONFIG_HPP
#define RAUZY_CONFIG_HPP

#include <string>
#include <string_view>

#include <json.hpp>

namespace rauzy::config {

// Reads the TOML subset used by substitution and family files into a JSON
// document: bare/quoted keys, strings, numbers, booleans, arrays (may span
// lines), inline tables, [table] and [[array-of-tables]] headers, # comments.
// Dotted keys and date-times are not supported.
nlohmann::json parse_toml(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace rauzy::config

#endif
