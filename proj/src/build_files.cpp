#include "lichen/build_files.hpp"

#include <expat.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <regex>
#include <sstream>

namespace lichen {
namespace {

std::string trimmed(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

struct PomDependency {
  std::map<std::string, std::string> fields;
  int line = 0;
};

// Collects text of interesting elements while expat walks the document.
class PomHandler {
 public:
  explicit PomHandler(XML_Parser parser) : parser_(parser) {}

  void start(const char* name) {
    path_.emplace_back(name);
    text_.clear();
    const std::string p = joined();
    if (p == "project/dependencies/dependency" || p == "project/dependencyManagement/dependencies/dependency") {
      current_ = PomDependency{};
      current_.line = static_cast<int>(XML_GetCurrentLineNumber(parser_));
    }
  }

  void end() {
    const std::string p = joined();
    const std::string value = trimmed(text_);
    if (p == "project/modules/module") {
      modules.push_back(value);
    } else if (p == "project/licenses/license/name") {
      licenses.push_back(value);
    } else if (p == "project/dependencies/dependency") {
      dependencies.push_back(current_);
    } else if (p == "project/dependencyManagement/dependencies/dependency") {
      managed.push_back(current_);
    } else if (path_.size() == 4 && p.starts_with("project/dependencies/dependency/")) {
      current_.fields[path_.back()] = value;
    } else if (path_.size() == 5 && p.starts_with("project/dependencyManagement/dependencies/dependency/")) {
      current_.fields[path_.back()] = value;
    } else if (path_.size() == 3 && path_[1] == "properties") {
      properties[path_.back()] = value;
    } else if (path_.size() == 2 && (path_[1] == "groupId" || path_[1] == "version" || path_[1] == "artifactId")) {
      properties["project." + path_[1]] = value;
    } else if (path_.size() == 3 && path_[1] == "parent" && (path_[2] == "groupId" || path_[2] == "version")) {
      properties["project.parent." + path_[2]] = value;
    }
    path_.pop_back();
    text_.clear();
  }

  void text(const char* s, int len) { text_.append(s, static_cast<std::size_t>(len)); }

  std::vector<std::string> modules;
  std::vector<std::string> licenses;
  std::vector<PomDependency> dependencies;
  std::vector<PomDependency> managed;
  std::map<std::string, std::string> properties;

 private:
  std::string joined() const {
    std::string s;
    for (const auto& p : path_) {
      if (!s.empty()) s += '/';
      s += p;
    }
    return s;
  }

  XML_Parser parser_;
  std::vector<std::string> path_;
  std::string text_;
  PomDependency current_;
};

// Expands ${name} references; unresolvable references are left in place.
std::string expand(const std::string& value, const std::map<std::string, std::string>& props, int depth = 0) {
  std::string out;
  std::size_t pos = 0;
  while (pos < value.size()) {
    const auto open = value.find("${", pos);
    if (open == std::string::npos) break;
    const auto close = value.find('}', open);
    if (close == std::string::npos) break;
    out.append(value, pos, open - pos);
    std::string key = value.substr(open + 2, close - open - 2);
    if (key == "version" || key == "groupId") key = "project." + key;
    auto it = props.find(key);
    if (it == props.end() && key.starts_with("project.")) it = props.find("project.parent." + key.substr(8));
    if (it != props.end() && depth < 8) {
      out += expand(it->second, props, depth + 1);
    } else {
      out.append(value, open, close - open + 1);
    }
    pos = close + 1;
  }
  out.append(value, pos);
  return out;
}

bool unresolved(const std::string& s) { return s.empty() || s.find("${") != std::string::npos; }

}  // namespace

BuildFileKind classify_build_file(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  if (name == "pom.xml") return BuildFileKind::kMavenPom;
  if (name == "build.gradle") return BuildFileKind::kGradleGroovy;
  if (name == "build.gradle.kts") return BuildFileKind::kGradleKotlin;
  if (name == "settings.gradle" || name == "settings.gradle.kts") return BuildFileKind::kGradleSettings;
  return BuildFileKind::kUnrecognized;
}

PomInfo parse_pom(std::string_view xml, std::string_view source_name) {
  PomInfo info;
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate(nullptr), &XML_ParserFree);
  PomHandler handler(parser.get());
  XML_SetUserData(parser.get(), &handler);
  XML_SetElementHandler(
      parser.get(),
      [](void* data, const XML_Char* name, const XML_Char**) { static_cast<PomHandler*>(data)->start(name); },
      [](void* data, const XML_Char*) { static_cast<PomHandler*>(data)->end(); });
  XML_SetCharacterDataHandler(parser.get(), [](void* data, const XML_Char* s, int len) {
    static_cast<PomHandler*>(data)->text(s, len);
  });
  if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
    info.well_formed = false;
    info.warnings.push_back(
        {std::string(source_name), "malformed pom.xml at line " +
                                       std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                                       XML_ErrorString(XML_GetErrorCode(parser.get()))});
    return info;
  }

  info.modules = handler.modules;
  info.license_names = handler.licenses;

  std::map<std::pair<std::string, std::string>, std::string> managed_versions;
  for (const auto& dep : handler.managed) {
    auto field = [&](const char* k) {
      auto it = dep.fields.find(k);
      return it == dep.fields.end() ? std::string() : expand(it->second, handler.properties);
    };
    managed_versions[{field("groupId"), field("artifactId")}] = field("version");
  }

  for (const auto& dep : handler.dependencies) {
    auto field = [&](const char* k) {
      auto it = dep.fields.find(k);
      return it == dep.fields.end() ? std::string() : expand(it->second, handler.properties);
    };
    DeclaredDependency out;
    out.coordinates = {field("groupId"), field("artifactId"), field("version")};
    out.scope = field("scope");
    if (out.scope.empty()) out.scope = "compile";
    out.test = out.scope == "test";
    out.line = dep.line;
    if (unresolved(out.coordinates.version)) {
      auto it = managed_versions.find({out.coordinates.group, out.coordinates.artifact});
      if (it != managed_versions.end() && !unresolved(it->second)) out.coordinates.version = it->second;
    }
    if (unresolved(out.coordinates.group) || unresolved(out.coordinates.artifact) ||
        unresolved(out.coordinates.version)) {
      info.warnings.push_back({std::string(source_name) + ":" + std::to_string(dep.line),
                               "skipping dependency with unresolved coordinates " + out.coordinates.str()});
      continue;
    }
    info.dependencies.push_back(std::move(out));
  }
  return info;
}

std::vector<DeclaredDependency> parse_gradle_dependencies(std::string_view script, std::string_view source_name,
                                                          std::vector<Warning>& warnings) {
  static const std::regex kConfiguration(
      R"(^\s*([A-Za-z][A-Za-z0-9]*)\s*\(?\s*(.*)$)");
  static const std::regex kConfigName(
      R"(^[A-Za-z0-9]*?(implementation|Implementation|api|Api|compileOnly|CompileOnly|runtimeOnly|RuntimeOnly|compile|Compile|runtime|Runtime|annotationProcessor|AnnotationProcessor|kapt)$)");
  static const std::regex kStringCoordinate(R"(^["']([^"':\s]+):([^"':\s]+):([^"'\s]+)["'])");
  static const std::regex kMapNotation(
      R"(group\s*[:=]\s*["']([^"']+)["']\s*,\s*name\s*[:=]\s*["']([^"']+)["']\s*,\s*version\s*[:=]\s*["']([^"']+)["'])");
  static const std::regex kAnyQuoted(R"(^["'][^"']*["'])");

  std::vector<DeclaredDependency> deps;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= script.size()) {
    const auto eol = script.find('\n', pos);
    const std::string line(script.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos));
    ++line_no;
    pos = eol == std::string_view::npos ? script.size() + 1 : eol + 1;

    std::smatch m;
    if (!std::regex_match(line, m, kConfiguration)) continue;
    const std::string config = m[1];
    if (!std::regex_match(config, kConfigName)) continue;
    const std::string rest = m[2];

    std::smatch c;
    DeclaredDependency dep;
    if (std::regex_search(rest, c, kStringCoordinate)) {
      std::string version = c[3];
      // "g:a:v:classifier" and "g:a:v@ext" keep only the version.
      version = version.substr(0, version.find_first_of(":@"));
      dep.coordinates = {c[1], c[2], version};
    } else if (std::regex_search(rest, c, kMapNotation)) {
      dep.coordinates = {c[1], c[2], c[3]};
    } else {
      if (std::regex_search(rest, kAnyQuoted)) {
        warnings.push_back({std::string(source_name) + ":" + std::to_string(line_no),
                            "skipping unparsable dependency declaration"});
      }
      continue;
    }
    dep.scope = config;
    dep.test = config.starts_with("test") || config.starts_with("androidTest");
    dep.line = line_no;
    deps.push_back(std::move(dep));
  }
  return deps;
}

std::vector<std::string> parse_gradle_includes(std::string_view settings) {
  static const std::regex kInclude(R"(^\s*include\b(.*)$)");
  static const std::regex kQuoted(R"(["']([^"']+)["'])");
  std::vector<std::string> modules;
  std::istringstream in{std::string(settings)};
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (!std::regex_match(line, m, kInclude)) continue;
    const std::string args = m[1];
    for (auto it = std::sregex_iterator(args.begin(), args.end(), kQuoted); it != std::sregex_iterator(); ++it) {
      std::string project = (*it)[1];
      while (!project.empty() && project.front() == ':') project.erase(project.begin());
      std::replace(project.begin(), project.end(), ':', '/');
      if (!project.empty()) modules.push_back(project);
    }
  }
  return modules;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

std::vector<DeclaredDependency> read_build_file_dependencies(const std::filesystem::path& build_file,
                                                             std::vector<Warning>& warnings,
                                                             std::string_view display_name) {
  const std::string name = display_name.empty() ? build_file.string() : std::string(display_name);
  switch (classify_build_file(build_file)) {
    case BuildFileKind::kMavenPom: {
      auto info = parse_pom(read_text_file(build_file), name);
      warnings.insert(warnings.end(), info.warnings.begin(), info.warnings.end());
      return info.dependencies;
    }
    case BuildFileKind::kGradleGroovy:
    case BuildFileKind::kGradleKotlin:
      return parse_gradle_dependencies(read_text_file(build_file), name, warnings);
    case BuildFileKind::kGradleSettings:
    case BuildFileKind::kUnrecognized:
      break;
  }
  throw Error("not a Maven or Gradle build file: " + build_file.string());
}

std::vector<DeclaredDependency> extract_dependencies(const std::filesystem::path& module_dir,
                                                     std::vector<Warning>& warnings, std::string_view display_dir) {
  const std::filesystem::path shown = display_dir.empty() ? module_dir : std::filesystem::path(display_dir);
  for (const char* name : {"pom.xml", "build.gradle.kts", "build.gradle"}) {
    const auto path = module_dir / name;
    if (std::filesystem::is_regular_file(path)) {
      return read_build_file_dependencies(path, warnings, (shown / name).lexically_normal().generic_string());
    }
  }
  warnings.push_back({shown.generic_string(), "no build file found"});
  return {};
}

}  // namespace lichen
