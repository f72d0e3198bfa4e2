#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string_view>

namespace lichen {

// The closed set of licenses the tool reasons about. Unknown means "a
// license is present but was not recognized"; None means "no license".
enum class LicenseId : std::uint8_t {
  kApache2,
  kMit,
  kBsd2Clause,
  kBsd3Clause,
  kGpl2Only,
  kGpl3Only,
  kLgpl21Only,
  kLgpl3Only,
  kAgpl3Only,
  kMpl2,
  kEpl2,
  kIsc,
  kCddl1,
  kEpl1,
  kGpl2ClasspathException,
  kMpl1,
  kUnknown,
  kNone,
};

inline constexpr std::size_t kSupportedLicenseCount = 16;

// Supported ids, in lexicographic order of their SPDX rendering.
inline constexpr std::array<LicenseId, kSupportedLicenseCount> kSupportedLicenses = {
    LicenseId::kAgpl3Only,  LicenseId::kApache2,
    LicenseId::kBsd2Clause, LicenseId::kBsd3Clause,
    LicenseId::kCddl1,      LicenseId::kEpl1,
    LicenseId::kEpl2,       LicenseId::kGpl2Only,
    LicenseId::kGpl2ClasspathException,
    LicenseId::kGpl3Only,   LicenseId::kIsc,
    LicenseId::kLgpl21Only, LicenseId::kLgpl3Only,
    LicenseId::kMit,        LicenseId::kMpl1,
    LicenseId::kMpl2,
};

constexpr bool is_supported(LicenseId id) {
  return id != LicenseId::kUnknown && id != LicenseId::kNone;
}

std::string_view render(LicenseId id);

// Exact, case-insensitive SPDX id match; Unknown otherwise. "None" is not a
// license name and also maps to Unknown.
LicenseId parse_spdx(std::string_view name);

inline std::ostream& operator<<(std::ostream& os, LicenseId id) { return os << render(id); }

}  // namespace lichen
