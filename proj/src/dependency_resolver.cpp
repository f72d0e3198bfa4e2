#include "lichen/dependency_resolver.hpp"

#include <algorithm>
#include <set>

#include "lichen/project_scanner.hpp"
#include "lichen/zip_reader.hpp"
#include "parallel.hpp"

namespace fs = std::filesystem;

namespace lichen {
namespace {

std::string base_name(const std::string& entry) {
  const auto slash = entry.find_last_of('/');
  return slash == std::string::npos ? entry : entry.substr(slash + 1);
}

bool is_embedded_pom(const std::string& entry) {
  return entry.starts_with("META-INF/maven/") && base_name(entry) == "pom.xml";
}

DetectionResult declared(LicenseId id, DetectionMethod method) {
  DetectionResult result;
  result.license = id;
  result.method = method;
  result.score = id == LicenseId::kUnknown ? 0.0 : 1.0;
  return result;
}

}  // namespace

std::string_view render(EvidenceSource source) {
  switch (source) {
    case EvidenceSource::kJarFile: return "jar-file";
    case EvidenceSource::kJarPom: return "jar-pom";
    case EvidenceSource::kProvider: return "provider";
  }
  return "provider";
}

Dependency Dependency::from(const DeclaredDependency& d) {
  Dependency dep;
  dep.coordinates = d.coordinates;
  dep.scope = d.scope;
  dep.test = d.test;
  dep.line = d.line;
  return dep;
}

LicenseId resolve_evidence(const std::vector<Evidence>& evidence) {
  for (EvidenceSource source : {EvidenceSource::kJarFile, EvidenceSource::kJarPom, EvidenceSource::kProvider}) {
    for (const auto& e : evidence) {
      if (e.source == source && e.detection.license != LicenseId::kUnknown) return e.detection.license;
    }
  }
  return LicenseId::kUnknown;
}

JarInspection inspect_jar(const fs::path& jar, const Detector& detector, const LicenseNameTable& names) {
  JarInspection out;
  const auto archive = ZipArchive::open(jar);
  const std::string jar_name = jar.filename().string();

  // Entry order of the central directory is the archive's own order; sort by
  // name so evidence order does not depend on how the jar was packed.
  std::vector<const ZipEntry*> entries;
  for (const auto& entry : archive.entries()) {
    if (!entry.is_directory()) entries.push_back(&entry);
  }
  std::sort(entries.begin(), entries.end(), [](const ZipEntry* a, const ZipEntry* b) { return a->name < b->name; });

  for (const ZipEntry* entry : entries) {
    const bool license_file = is_license_file_name(base_name(entry->name));
    const bool pom = is_embedded_pom(entry->name);
    if (!license_file && !pom) continue;
    if (entry->uncompressed_size > kMaxJarEntryBytes) {
      out.warnings.push_back({jar_name + "!/" + entry->name, "entry larger than 1 MiB skipped"});
      continue;
    }
    const std::string content = archive.read(*entry);
    if (license_file) {
      out.evidence.push_back({EvidenceSource::kJarFile, detector.detect(content), entry->name});
    } else {
      const auto info = parse_pom(content, jar_name + "!/" + entry->name);
      out.warnings.insert(out.warnings.end(), info.warnings.begin(), info.warnings.end());
      for (const auto& name : info.license_names) {
        out.evidence.push_back(
            {EvidenceSource::kJarPom, declared(names.normalize(name), DetectionMethod::kDeclaredName), name});
      }
    }
  }
  return out;
}

fs::path artifact_path(const fs::path& repository, const Coordinates& c) {
  std::string group_dir = c.group;
  std::replace(group_dir.begin(), group_dir.end(), '.', '/');
  return repository / group_dir / c.artifact / c.version / (c.artifact + "-" + c.version + ".jar");
}

DependencyResolver::DependencyResolver(const Detector& detector, const LicenseNameTable& names,
                                       MetadataProvider& provider, ResolverOptions options)
    : detector_(detector), names_(names), provider_(provider), options_(std::move(options)) {}

Dependency DependencyResolver::resolve(const DeclaredDependency& declared_dep, std::vector<Warning>& warnings) const {
  Dependency dep = Dependency::from(declared_dep);
  const std::string where = dep.coordinates.str();

  if (options_.artifact_repository) {
    const auto jar = artifact_path(*options_.artifact_repository, dep.coordinates);
    std::error_code ec;
    if (fs::is_regular_file(jar, ec)) {
      try {
        auto inspection = inspect_jar(jar, detector_, names_);
        dep.evidence = std::move(inspection.evidence);
        for (auto& w : inspection.warnings) warnings.push_back({where, w.path + ": " + w.message});
      } catch (const Error& e) {
        warnings.push_back({where, std::string("cannot inspect jar: ") + e.what()});
      }
    }
  }

  try {
    if (auto record = provider_.fetch(dep.coordinates)) {
      dep.homepage = record->homepage;
      if (record->license_name) {
        dep.evidence.push_back({EvidenceSource::kProvider,
                                declared(names_.normalize(*record->license_name), DetectionMethod::kProvider),
                                *record->license_name});
      }
    }
  } catch (const Error& e) {
    warnings.push_back({where, std::string("metadata provider unavailable: ") + e.what()});
  }

  dep.resolved = resolve_evidence(dep.evidence);

  std::set<LicenseId> claimed;
  for (const auto& e : dep.evidence) {
    if (e.detection.license != LicenseId::kUnknown) claimed.insert(e.detection.license);
  }
  if (claimed.size() > 1) {
    std::string detail;
    for (const auto& e : dep.evidence) {
      if (e.detection.license == LicenseId::kUnknown) continue;
      detail += (detail.empty() ? "" : ", ") + std::string(render(e.source)) + " says " +
                std::string(render(e.detection.license));
    }
    warnings.push_back({where, "license evidence disagrees (" + detail + "); using " +
                                   std::string(render(dep.resolved))});
  }
  if (dep.resolved == LicenseId::kUnknown) {
    warnings.push_back({where, dep.evidence.empty() ? "no license information found"
                                                    : "license not recognized from available evidence"});
  }
  return dep;
}

std::vector<Dependency> DependencyResolver::resolve_all(const std::vector<DeclaredDependency>& declared_deps,
                                                        std::vector<Warning>& warnings) const {
  std::vector<Dependency> out(declared_deps.size());
  std::vector<std::vector<Warning>> per_dep(declared_deps.size());
  detail::parallel_for(declared_deps.size(), options_.max_in_flight,
                       [&](std::size_t i) { out[i] = resolve(declared_deps[i], per_dep[i]); });
  for (auto& w : per_dep) warnings.insert(warnings.end(), w.begin(), w.end());
  return out;
}

}  // namespace lichen
