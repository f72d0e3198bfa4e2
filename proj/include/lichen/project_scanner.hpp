#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lichen/dependency_resolver.hpp"
#include "lichen/detector.hpp"
#include "lichen/error.hpp"

namespace lichen {

struct DeclaredLicense {
  std::string file;  // relative to the project root
  DetectionResult detection;
};

struct ModuleNode {
  std::string path;  // relative to the project root, "." for the root
  std::optional<DeclaredLicense> declared_license;
  LicenseId effective_license = LicenseId::kNone;
  std::vector<ModuleNode> children;
  std::vector<Dependency> dependencies;
};

struct ScanReport {
  ModuleNode root;
  std::vector<Warning> warnings;
};

// Root plus every declared module (Maven <module>, Gradle `include`),
// followed recursively. Depth-first preorder, children in declaration order.
// Throws IoError when the root is not a readable directory; malformed build
// files and missing module directories become warnings.
std::vector<std::filesystem::path> discover_modules(const std::filesystem::path& root,
                                                    std::vector<Warning>& warnings);

// Basename is LICENSE, LICENCE, COPYING or UNLICENSE (any case) with no
// extension or .txt/.md/.rst.
bool is_license_file_name(std::string_view file_name);

// The license file of a directory. With several candidates the extensionless
// LICENSE wins, then the lexicographically first name, and a warning lists
// all of them.
std::optional<std::filesystem::path> find_license_file(const std::filesystem::path& dir,
                                                       std::vector<Warning>& warnings);

// Sets effective_license top-down: the declared detection when a license file
// exists (Unknown included), otherwise the parent's, None at the root.
void apply_inheritance(ModuleNode& node, LicenseId parent_license = LicenseId::kNone);

// Builds the module tree and detects each module's license file. Throws
// IoError when the root is unreadable.
ScanReport scan(const std::filesystem::path& root, const Detector& detector);

// Preorder walk helpers.
std::vector<const ModuleNode*> flatten(const ModuleNode& root);
const ModuleNode* find_module(const ModuleNode& root, std::string_view path);
ModuleNode* find_module(ModuleNode& root, std::string_view path);

}  // namespace lichen
