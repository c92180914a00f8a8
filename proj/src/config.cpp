#include "dbn/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dbn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  const auto hash = s.find('#');
  return trim(hash == std::string::npos ? s : s.substr(0, hash));
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::istream& in, const std::set<std::string>& allowed_keys) {
  std::vector<ConfigEntry> out;
  std::set<std::string> seen;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    const std::string text = strip_comment(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" + text + "'");
    }
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    std::replace(key.begin(), key.end(), '-', '_');
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": missing key");
    if (value.empty()) throw ConfigError("line " + std::to_string(line) + ": missing value for '" + key + "'");
    if (allowed_keys.count(key) == 0) throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' given twice");
    }
    out.push_back({std::move(key), std::move(value), line});
  }
  return out;
}

std::vector<BooleanMatrix> parse_rule_vector_list(std::istream& in, int nodes) {
  std::vector<BooleanMatrix> out;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    std::string text = strip_comment(raw);
    if (text.empty()) continue;
    for (char& ch : text) {
      if (ch == '(' || ch == ')' || ch == ',') ch = ' ';
    }
    std::istringstream fields(text);
    std::vector<std::uint64_t> numbers;
    std::string tok;
    while (fields >> tok) {
      if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ConfigError("line " + std::to_string(line) + ": '" + tok + "' is not a rule number");
      }
      numbers.push_back(std::stoull(tok));
    }
    if (numbers.size() != static_cast<std::size_t>(nodes)) {
      throw ConfigError("line " + std::to_string(line) + ": expected " + std::to_string(nodes) + " rule numbers");
    }
    try {
      out.push_back(matrix_from_rule_vector(RuleVector(nodes, numbers)));
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(line) + ": " + e.what());
    }
  }
  if (out.empty()) throw ConfigError("rule-vector list is empty");
  return out;
}

}  // namespace dbn
