#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lichen/compatibility.hpp"
#include "lichen/dependency_resolver.hpp"
#include "lichen/detector.hpp"
#include "lichen/project_scanner.hpp"
#include "lichen/provider.hpp"

namespace lichen {

inline constexpr int kReportFormatVersion = 1;

std::string_view tool_version();

struct Report {
  std::string tool_version;
  std::string matrix_version;
  ModuleNode root;
  std::vector<Violation> violations;
  // One per module that owns a license decision: the root and every module
  // with its own license file.
  std::vector<Suggestion> suggestions;
  std::vector<Warning> warnings;
};

// Everything one analysis needs; all references must outlive the call.
struct AnalysisContext {
  const Detector& detector;
  const LicenseNameTable& names;
  MetadataProvider& provider;
  ResolverOptions resolver;
};

// Attaches the declared dependencies of every module of `report.root`,
// resolved through the context. Warnings are appended in module order.
void attach_dependencies(const std::filesystem::path& project_root, ModuleNode& root,
                         const AnalysisContext& context, std::vector<Warning>& warnings);

// scan -> resolve -> check -> suggest. Throws IoError for an unreadable root.
Report analyze(const std::filesystem::path& project_root, const AnalysisContext& context);

// Violations and suggestions for an already resolved tree; used after the
// tree is edited in memory.
void evaluate(const LicenseCorpus& corpus, Report& report);

// Stable JSON: fixed key order, two-space indent, trailing newline, paths
// relative to the project root.
std::string render_json(const Report& report);
std::string render_json(const Suggestion& suggestion);
std::string render_json(const DetectionResult& detection);
std::string render_text(const Report& report);

}  // namespace lichen
