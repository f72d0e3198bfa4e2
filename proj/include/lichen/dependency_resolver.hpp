#pragma once

#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lichen/build_files.hpp"
#include "lichen/detector.hpp"
#include "lichen/error.hpp"
#include "lichen/provider.hpp"

namespace lichen {

// In priority order: a license file inside the jar, the name declared in the
// jar's embedded pom.xml, then the metadata provider.
enum class EvidenceSource { kJarFile, kJarPom, kProvider };

std::string_view render(EvidenceSource source);

struct Evidence {
  EvidenceSource source;
  DetectionResult detection;
  // Archive entry name, or the raw license name that was normalized.
  std::string detail;
};

struct Dependency {
  Coordinates coordinates;
  std::string scope;
  bool test = false;
  int line = 0;
  std::vector<Evidence> evidence;
  LicenseId resolved = LicenseId::kUnknown;
  std::optional<std::string> homepage;

  static Dependency from(const DeclaredDependency& declared);
};

// First non-Unknown evidence in source priority order, Unknown otherwise.
LicenseId resolve_evidence(const std::vector<Evidence>& evidence);

// Ordered regex table mapping free-form license names to SPDX ids.
class LicenseNameTable {
 public:
  // Embedded table, or the file at `path`. Throws DataError on bad rows.
  static LicenseNameTable load(const std::optional<std::filesystem::path>& path = std::nullopt);
  static LicenseNameTable parse(std::string_view text, std::string_view source_name);
  static const LicenseNameTable& builtin();

  // First matching row, then exact SPDX id, otherwise Unknown. Never None.
  LicenseId normalize(std::string_view name) const;

  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::pair<std::regex, LicenseId>> rows_;
};

inline constexpr std::size_t kMaxJarEntryBytes = 1 << 20;

struct JarInspection {
  std::vector<Evidence> evidence;
  std::vector<Warning> warnings;
};

// License-named entries anywhere in the archive (detected from their text)
// and <licenses><license><name> of META-INF/maven/**/pom.xml. Entries over
// kMaxJarEntryBytes are skipped with a warning. Throws ArchiveError for
// corrupt archives, IoError when unreadable.
JarInspection inspect_jar(const std::filesystem::path& jar, const Detector& detector,
                          const LicenseNameTable& names);

// <root>/<group with dots as slashes>/<artifact>/<version>/<artifact>-<version>.jar
std::filesystem::path artifact_path(const std::filesystem::path& repository, const Coordinates& coordinates);

struct ResolverOptions {
  // Local Maven-layout repository; nullopt skips jar inspection.
  std::optional<std::filesystem::path> artifact_repository;
  std::size_t max_in_flight = 8;
};

class DependencyResolver {
 public:
  DependencyResolver(const Detector& detector, const LicenseNameTable& names, MetadataProvider& provider,
                     ResolverOptions options);

  // Gathers jar evidence when the artifact is in the repository, always asks
  // the provider, and fills evidence, resolved and homepage. Provider
  // failures become warnings.
  Dependency resolve(const DeclaredDependency& declared, std::vector<Warning>& warnings) const;

  // Resolves in parallel with at most max_in_flight concurrent provider
  // calls. Output order and warnings follow input order.
  std::vector<Dependency> resolve_all(const std::vector<DeclaredDependency>& declared,
                                      std::vector<Warning>& warnings) const;

 private:
  const Detector& detector_;
  const LicenseNameTable& names_;
  MetadataProvider& provider_;
  ResolverOptions options_;
};

}  // namespace lichen
