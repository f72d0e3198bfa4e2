#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lichen/error.hpp"

namespace lichen {

struct Coordinates {
  std::string group;
  std::string artifact;
  std::string version;

  // "group:artifact:version"
  std::string str() const { return group + ":" + artifact + ":" + version; }

  friend bool operator==(const Coordinates&, const Coordinates&) = default;
  friend auto operator<=>(const Coordinates&, const Coordinates&) = default;
};

struct DeclaredDependency {
  Coordinates coordinates;
  std::string scope;  // Maven scope or Gradle configuration
  bool test = false;
  int line = 0;       // 1-based line of the declaration in its build file

  friend bool operator==(const DeclaredDependency&, const DeclaredDependency&) = default;
};

enum class BuildFileKind { kMavenPom, kGradleGroovy, kGradleKotlin, kGradleSettings, kUnrecognized };

// Classification by file name: pom.xml, build.gradle, build.gradle.kts,
// settings.gradle(.kts).
BuildFileKind classify_build_file(const std::filesystem::path& path);

struct PomInfo {
  bool well_formed = true;
  std::vector<std::string> modules;
  std::vector<DeclaredDependency> dependencies;
  std::vector<std::string> license_names;
  std::vector<Warning> warnings;
};

// Extracts <modules>, <dependencies> and <licenses> of a Maven project.
// ${...} references are resolved from <properties> and the project/parent
// coordinates; a dependency without a resolvable version falls back to the
// same pom's <dependencyManagement>, and is skipped with a warning otherwise.
// Malformed XML yields well_formed = false plus a warning.
PomInfo parse_pom(std::string_view xml, std::string_view source_name);

// String-literal "group:artifact:version" coordinates on lines whose leading
// identifier is a dependency configuration (implementation, api, compileOnly,
// testImplementation, ...). Map notation (group: 'g', name: 'a',
// version: 'v') is accepted too. Versions are kept verbatim.
std::vector<DeclaredDependency> parse_gradle_dependencies(std::string_view script,
                                                          std::string_view source_name,
                                                          std::vector<Warning>& warnings);

// Project paths from `include` statements of a settings script, mapped to
// directories: ":a:b" -> "a/b".
std::vector<std::string> parse_gradle_includes(std::string_view settings);

// Reads the dependencies of whichever build file the module directory has
// (pom.xml first, then build.gradle.kts, then build.gradle). No build file
// gives an empty list and a warning. Warnings name files relative to
// `display_dir` when it is given.
std::vector<DeclaredDependency> extract_dependencies(const std::filesystem::path& module_dir,
                                                     std::vector<Warning>& warnings,
                                                     std::string_view display_dir = {});

// Dependencies of one specific build file. Throws Error for files that are
// not Maven or Gradle build scripts.
std::vector<DeclaredDependency> read_build_file_dependencies(const std::filesystem::path& build_file,
                                                             std::vector<Warning>& warnings,
                                                             std::string_view display_name = {});

std::string read_text_file(const std::filesystem::path& path);

}  // namespace lichen
