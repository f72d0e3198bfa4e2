#include <algorithm>
#include <fstream>
#include <sstream>

#include "ini_file.hpp"
#include "lichen/dependency_resolver.hpp"
#include "lichen/resources.hpp"

namespace lichen {

LicenseNameTable LicenseNameTable::parse(std::string_view text, std::string_view source_name) {
  LicenseNameTable table;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty() || detail::trim(line).front() == '#') continue;
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    const auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) throw DataError(where + ": expected <pattern><TAB><SPDX id>");
    const LicenseId id = parse_spdx(detail::trim(line.substr(tab + 1)));
    if (!is_supported(id)) throw DataError(where + ": unsupported SPDX id");
    try {
      table.rows_.emplace_back(std::regex(std::string(line.substr(0, tab)),
                                          std::regex::ECMAScript | std::regex::icase | std::regex::optimize),
                               id);
    } catch (const std::regex_error& e) {
      throw DataError(where + ": bad pattern: " + e.what());
    }
  }
  return table;
}

LicenseNameTable LicenseNameTable::load(const std::optional<std::filesystem::path>& path) {
  if (path) {
    std::ifstream in(*path, std::ios::binary);
    if (!in) throw DataError("cannot read license name table " + path->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path->string());
  }
  auto text = find_embedded(embedded_data_files(), "license_names.tsv");
  if (!text) throw DataError("missing bundled license_names.tsv");
  return parse(*text, "license_names.tsv");
}

const LicenseNameTable& LicenseNameTable::builtin() {
  static const LicenseNameTable table = load();
  return table;
}

LicenseId LicenseNameTable::normalize(std::string_view name) const {
  // Collapse whitespace so wrapped XML text matches single-line patterns.
  std::string cleaned;
  for (char c : detail::trim(name)) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (space && (cleaned.empty() || cleaned.back() == ' ')) continue;
    cleaned += space ? ' ' : c;
  }
  if (cleaned.empty()) return LicenseId::kUnknown;
  for (const auto& [pattern, id] : rows_) {
    if (std::regex_match(cleaned, pattern)) return id;
  }
  return parse_spdx(cleaned);
}

}  // namespace lichen
