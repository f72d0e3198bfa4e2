#include "lichen/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "ini_file.hpp"
#include "lichen/error.hpp"
#include "lichen/resources.hpp"

namespace lichen {
namespace {

constexpr std::size_t index_of(LicenseId id) { return static_cast<std::size_t>(id); }

std::string read_data_file(const std::optional<std::filesystem::path>& override_dir,
                           const std::string& name) {
  if (override_dir) {
    const auto path = *override_dir / name;
    if (std::filesystem::exists(path)) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw DataError("cannot read " + path.string());
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }
  }
  auto data = find_embedded(embedded_data_files(), name);
  if (!data) throw DataError("missing bundled data file " + name);
  return std::string(*data);
}

LicenseSet parse_license_list(const std::string& value, const std::string& where) {
  LicenseSet set;
  for (const auto& item : detail::split_list(value)) {
    const LicenseId id = parse_spdx(item);
    if (!is_supported(id)) throw DataError(where + ": unsupported license '" + item + "'");
    set.insert(id);
  }
  return set;
}

}  // namespace

LicenseSet::LicenseSet(std::initializer_list<LicenseId> ids) {
  for (LicenseId id : ids) insert(id);
}

LicenseSet LicenseSet::all_supported() {
  LicenseSet s;
  s.bits_.set();
  return s;
}

void LicenseSet::insert(LicenseId id) {
  if (is_supported(id)) bits_.set(index_of(id));
}

bool LicenseSet::contains(LicenseId id) const { return is_supported(id) && bits_.test(index_of(id)); }

LicenseSet LicenseSet::intersect(const LicenseSet& other) const {
  LicenseSet out;
  out.bits_ = bits_ & other.bits_;
  return out;
}

std::vector<LicenseId> LicenseSet::to_vector() const {
  std::vector<LicenseId> out;
  for (LicenseId id : kSupportedLicenses) {
    if (contains(id)) out.push_back(id);
  }
  return out;
}

LicenseCorpus LicenseCorpus::load(const std::optional<std::filesystem::path>& override_dir) {
  const std::string ini = read_data_file(override_dir, "license_data.ini");
  const auto sections = detail::parse_ini(ini, "license_data.ini");

  LicenseCorpus corpus;
  auto version = sections.front().values.find("version");
  if (version == sections.front().values.end()) throw DataError("license_data.ini: missing version");
  corpus.version_ = version->second;

  std::set<LicenseId> seen;
  std::set<int> ranks;
  for (auto it = sections.begin() + 1; it != sections.end(); ++it) {
    const std::string where = "license_data.ini:" + std::to_string(it->line) + " [" + it->name + "]";
    const LicenseId id = parse_spdx(it->name);
    if (!is_supported(id) || render(id) != it->name) {
      throw DataError(where + ": not a supported SPDX id");
    }
    seen.insert(id);
    auto field = [&](const char* key) -> const std::string& {
      auto f = it->values.find(key);
      if (f == it->values.end()) throw DataError(where + ": missing '" + key + "'");
      return f->second;
    };

    LicenseRecord& record = corpus.records_[index_of(id)];
    record.id = id;
    record.name = field("name");
    const std::string& rank = field("rank");
    auto [ptr, ec] = std::from_chars(rank.data(), rank.data() + rank.size(), record.permissiveness_rank);
    if (ec != std::errc() || ptr != rank.data() + rank.size()) throw DataError(where + ": bad rank");
    if (!ranks.insert(record.permissiveness_rank).second) {
      throw DataError(where + ": duplicate rank " + rank);
    }
    const std::string& classifier = field("classifier");
    if (classifier != "true" && classifier != "false") throw DataError(where + ": classifier must be true/false");
    record.in_classifier = classifier == "true";
    record.compatible_module_licenses = parse_license_list(field("compatible"), where);
    if (!record.compatible_module_licenses.contains(id)) {
      throw DataError(where + ": compatibility set must contain the license itself");
    }
    record.description.permissions = detail::split_list(field("permissions"));
    record.description.conditions = detail::split_list(field("conditions"));
    record.description.limitations = detail::split_list(field("limitations"));

    record.canonical_text = read_data_file(override_dir, "licenses/" + it->name + ".txt");
    record.word_set = normalize_tokens(record.canonical_text);
  }
  if (seen.size() != kSupportedLicenseCount) {
    throw DataError("license_data.ini: expected " + std::to_string(kSupportedLicenseCount) +
                    " licenses, found " + std::to_string(seen.size()));
  }
  return corpus;
}

const LicenseCorpus& LicenseCorpus::builtin() {
  static const LicenseCorpus corpus = load();
  return corpus;
}

const LicenseRecord& LicenseCorpus::lookup(LicenseId id) const {
  if (!is_supported(id)) throw NotFoundError("no corpus entry for license " + std::string(render(id)));
  return records_[index_of(id)];
}

std::vector<LicenseId> LicenseCorpus::classifier_licenses() const {
  std::vector<LicenseId> out;
  for (LicenseId id : kSupportedLicenses) {
    if (lookup(id).in_classifier) out.push_back(id);
  }
  return out;
}

LicenseId LicenseCorpus::most_permissive(const LicenseSet& candidates) const {
  if (candidates.empty()) throw EmptyCandidatesError("no candidate licenses");
  const auto members = candidates.to_vector();
  return *std::min_element(members.begin(), members.end(), [&](LicenseId a, LicenseId b) {
    return lookup(a).permissiveness_rank < lookup(b).permissiveness_rank;
  });
}

}  // namespace lichen
