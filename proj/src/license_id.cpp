#include "lichen/license_id.hpp"

#include <algorithm>
#include <cctype>

namespace lichen {

std::string_view render(LicenseId id) {
  switch (id) {
    case LicenseId::kApache2: return "Apache-2.0";
    case LicenseId::kMit: return "MIT";
    case LicenseId::kBsd2Clause: return "BSD-2-Clause";
    case LicenseId::kBsd3Clause: return "BSD-3-Clause";
    case LicenseId::kGpl2Only: return "GPL-2.0-only";
    case LicenseId::kGpl3Only: return "GPL-3.0-only";
    case LicenseId::kLgpl21Only: return "LGPL-2.1-only";
    case LicenseId::kLgpl3Only: return "LGPL-3.0-only";
    case LicenseId::kAgpl3Only: return "AGPL-3.0-only";
    case LicenseId::kMpl2: return "MPL-2.0";
    case LicenseId::kEpl2: return "EPL-2.0";
    case LicenseId::kIsc: return "ISC";
    case LicenseId::kCddl1: return "CDDL-1.0";
    case LicenseId::kEpl1: return "EPL-1.0";
    case LicenseId::kGpl2ClasspathException: return "GPL-2.0-with-classpath-exception";
    case LicenseId::kMpl1: return "MPL-1.0";
    case LicenseId::kUnknown: return "Unknown";
    case LicenseId::kNone: return "None";
  }
  return "Unknown";
}

LicenseId parse_spdx(std::string_view name) {
  auto equals_folded = [](std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
      return std::tolower(static_cast<unsigned char>(x)) ==
             std::tolower(static_cast<unsigned char>(y));
    });
  };
  for (LicenseId id : kSupportedLicenses) {
    if (equals_folded(name, render(id))) return id;
  }
  return LicenseId::kUnknown;
}

}  // namespace lichen
