#include "ini_file.hpp"

#include <set>

#include "lichen/error.hpp"

namespace lichen::detail {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<IniSection> parse_ini(std::string_view text, std::string_view source_name) {
  std::vector<IniSection> sections(1);
  std::set<std::string> seen;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw DataError(std::string(source_name) + ":" + std::to_string(line_no) + ": " + what);
  };
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.empty()) fail("empty section name");
      if (!seen.insert(name).second) fail("duplicate section [" + name + "]");
      sections.push_back(IniSection{name, {}, line_no});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail("empty key");
    auto [_, inserted] = sections.back().values.emplace(key, std::string(trim(line.substr(eq + 1))));
    if (!inserted) fail("duplicate key '" + key + "'");
  }
  return sections;
}

std::vector<std::string> split_list(std::string_view value, char separator) {
  std::vector<std::string> items;
  while (true) {
    const auto pos = value.find(separator);
    auto item = trim(value.substr(0, pos));
    if (!item.empty()) items.emplace_back(item);
    if (pos == std::string_view::npos) break;
    value.remove_prefix(pos + 1);
  }
  return items;
}

}  // namespace lichen::detail
