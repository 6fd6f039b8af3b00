#include "hardymod/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "hardymod/error.hpp"

namespace hardymod::cli {

namespace {

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
  }
  return true;
}

}  // namespace

const ConfigEntry* ConfigDocument::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const ConfigBlock* ConfigDocument::block(std::string_view label) const {
  for (const auto& b : blocks) {
    if (b.label == label) return &b;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> tokens(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

ConfigDocument parse_structured_text(std::string_view text) {
  ConfigDocument doc;
  std::set<std::string> keys;
  std::set<std::string> labels;
  ConfigBlock* open = nullptr;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto words = tokens(line);
    if (words[0] == "begin") {
      if (open) throw ParseError(line_no, open->label, "nested block");
      if (words.size() != 2 || !valid_key(words[1])) throw ParseError(line_no, "", "expected 'begin <label>'");
      if (!labels.insert(words[1]).second) throw ParseError(line_no, words[1], "duplicate block");
      doc.blocks.push_back({words[1], line_no, {}});
      open = &doc.blocks.back();
      continue;
    }
    if (words[0] == "end" && words.size() == 1) {
      if (!open) throw ParseError(line_no, "", "'end' without 'begin'");
      open = nullptr;
      continue;
    }
    if (open) {
      open->lines.emplace_back(line_no, line);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "", "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!valid_key(key)) throw ParseError(line_no, key, "invalid key");
    if (!keys.insert(key).second) throw ParseError(line_no, key, "duplicate key");
    doc.entries.push_back({key, value, line_no});
  }
  if (open) throw ParseError(open->line, open->label, "unterminated block");
  return doc;
}

ConfigDocument load_structured_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_structured_text(buf.str());
  } catch (const ParseError& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

double to_double(const std::string& s, int line, const std::string& field) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError(line, field, "expected a number, got '" + t + "'");
  }
  return v;
}

long long to_integer(const std::string& s, int line, const std::string& field) {
  const std::string t = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError(line, field, "expected an integer, got '" + t + "'");
  }
  return v;
}

std::vector<int> to_int_list(const std::string& s, int line, const std::string& field) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) out.push_back(static_cast<int>(to_integer(part, line, field)));
  return out;
}

}  // namespace hardymod::cli
