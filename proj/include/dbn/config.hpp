#pragma once

// Line-oriented `key = value` configuration files and rule-vector lists.

#include <cstddef>
#include <istream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbn/vbn.hpp"

namespace dbn {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Blank lines and lines starting with '#' are skipped; '-' in keys is read
/// as '_'. Throws ConfigError("line N: ...") for malformed lines, unknown
/// keys and repeated keys.
std::vector<ConfigEntry> parse_config(std::istream& in, const std::set<std::string>& allowed_keys);

/// One rule vector per line, as "(5,8)", "5,8" or "5 8"; '#' starts a
/// comment. Throws ConfigError naming the line on malformed input.
std::vector<BooleanMatrix> parse_rule_vector_list(std::istream& in, int nodes);

}  // namespace dbn
