#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hardymod::cli {

/// `key = value` on one line.
struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Body of a `begin label ... end` block, comments and blank lines removed.
struct ConfigBlock {
  std::string label;
  int line = 0;
  std::vector<std::pair<int, std::string>> lines;
};

struct ConfigDocument {
  std::vector<ConfigEntry> entries;
  std::vector<ConfigBlock> blocks;

  const ConfigEntry* find(std::string_view key) const;
  const ConfigBlock* block(std::string_view label) const;
};

/// Flat key-value text with labeled blocks. `#` starts a comment. Throws
/// ParseError on malformed lines, duplicate keys or labels, nested or
/// unterminated blocks.
ConfigDocument parse_structured_text(std::string_view text);

/// Reads a file and parses it. Parse failures become Error(Parse) with the
/// path in front of the line diagnostic.
ConfigDocument load_structured_text(const std::string& path);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
/// Whitespace-separated tokens.
std::vector<std::string> tokens(std::string_view s);

/// Strict numeric conversions; throw ParseError(line, field, ...).
double to_double(const std::string& s, int line, const std::string& field);
long long to_integer(const std::string& s, int line, const std::string& field);
std::vector<int> to_int_list(const std::string& s, int line, const std::string& field);

}  // namespace hardymod::cli
