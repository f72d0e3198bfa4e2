#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lichen::detail {

// Minimal INI reader: "key = value" lines, "[section]" headers, '#' or ';'
// comment lines. Keys before the first header belong to section "".
struct IniSection {
  std::string name;
  std::map<std::string, std::string> values;
  int line = 0;
};

// Throws DataError on syntax errors or duplicate keys/sections.
std::vector<IniSection> parse_ini(std::string_view text, std::string_view source_name);

std::vector<std::string> split_list(std::string_view value, char separator = ',');

std::string_view trim(std::string_view s);

}  // namespace lichen::detail
