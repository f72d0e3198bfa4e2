#pragma once

#include <bitset>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lichen/license_id.hpp"
#include "lichen/tokens.hpp"

namespace lichen {

// A set of supported licenses, indexed by enum value.
class LicenseSet {
 public:
  LicenseSet() = default;
  LicenseSet(std::initializer_list<LicenseId> ids);

  static LicenseSet all_supported();

  void insert(LicenseId id);
  bool contains(LicenseId id) const;
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }

  LicenseSet intersect(const LicenseSet& other) const;

  // Members in SPDX lexicographic order.
  std::vector<LicenseId> to_vector() const;

  friend bool operator==(const LicenseSet&, const LicenseSet&) = default;

 private:
  std::bitset<kSupportedLicenseCount> bits_;
};

struct LicenseDescription {
  std::vector<std::string> permissions;
  std::vector<std::string> conditions;
  std::vector<std::string> limitations;
};

struct LicenseRecord {
  LicenseId id = LicenseId::kUnknown;
  std::string name;
  std::string canonical_text;
  TokenSet word_set;
  LicenseDescription description;
  LicenseSet compatible_module_licenses;
  int permissiveness_rank = 0;
  bool in_classifier = false;
};

// Immutable after construction; concurrent reads are safe.
class LicenseCorpus {
 public:
  // Loads the embedded data; any file present in `override_dir`
  // (license_data.ini, licenses/<id>.txt) replaces its embedded counterpart.
  // Throws DataError when the data is inconsistent.
  static LicenseCorpus load(const std::optional<std::filesystem::path>& override_dir = std::nullopt);

  // Shared instance over the embedded data.
  static const LicenseCorpus& builtin();

  // Throws NotFoundError for Unknown/None.
  const LicenseRecord& lookup(LicenseId id) const;

  const std::string& version() const { return version_; }

  // Licenses the bag-of-words classifier covers, in SPDX order.
  std::vector<LicenseId> classifier_licenses() const;

  // The candidate with minimal permissiveness rank. Throws Error when
  // `candidates` is empty.
  LicenseId most_permissive(const LicenseSet& candidates) const;

 private:
  std::string version_;
  std::array<LicenseRecord, kSupportedLicenseCount> records_;
};

}  // namespace lichen
