#include "lichen/project_scanner.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "lichen/build_files.hpp"
#include "parallel.hpp"

namespace fs = std::filesystem;

namespace lichen {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string relative_name(const fs::path& root, const fs::path& path) {
  auto rel = path.lexically_relative(root).generic_string();
  return rel.empty() ? "." : rel;
}

// A strict, non-escaping subpath such as "a/b"; rejects "..", absolute paths.
bool is_contained(const std::string& rel) {
  if (rel.empty() || rel == "." || fs::path(rel).is_absolute()) return false;
  for (const auto& part : fs::path(rel).lexically_normal()) {
    if (part == "..") return false;
  }
  return true;
}

void collect_modules(const fs::path& root, const fs::path& dir, std::vector<fs::path>& out,
                     std::set<std::string>& seen, std::vector<Warning>& warnings) {
  std::vector<std::string> declared;
  const std::string dir_name = relative_name(root, dir);
  const auto pom = dir / "pom.xml";
  if (fs::is_regular_file(pom)) {
    const auto info = parse_pom(read_text_file(pom), (fs::path(dir_name) / "pom.xml").lexically_normal().generic_string());
    warnings.insert(warnings.end(), info.warnings.begin(), info.warnings.end());
    if (!info.well_formed && dir != root) return;
    declared.insert(declared.end(), info.modules.begin(), info.modules.end());
  }
  for (const char* settings : {"settings.gradle", "settings.gradle.kts"}) {
    const auto path = dir / settings;
    if (!fs::is_regular_file(path)) continue;
    const auto includes = parse_gradle_includes(read_text_file(path));
    declared.insert(declared.end(), includes.begin(), includes.end());
  }
  out.push_back(dir);

  for (const auto& module : declared) {
    const fs::path child = (dir / module).lexically_normal();
    std::string rel = child.lexically_relative(root).generic_string();
    if (!rel.empty() && rel.back() == '/') rel.pop_back();
    if (!is_contained(rel) || rel == dir_name) {
      warnings.push_back({dir_name, "module '" + module + "' lies outside the project; skipped"});
      continue;
    }
    if (!fs::is_directory(child)) {
      warnings.push_back({rel, "declared module directory does not exist; skipped"});
      continue;
    }
    if (!seen.insert(rel).second) {
      warnings.push_back({rel, "module declared more than once; keeping the first declaration"});
      continue;
    }
    const std::size_t before = out.size();
    collect_modules(root, root / rel, out, seen, warnings);
    if (out.size() == before) {
      warnings.push_back({rel, "module skipped because its build file is malformed"});
    }
  }
}

// Nests modules under the closest module directory that contains them.
ModuleNode build_tree(const std::vector<std::string>& paths) {
  ModuleNode root;
  root.path = ".";
  std::function<ModuleNode&(ModuleNode&, const std::string&)> parent_for = [&](ModuleNode& node,
                                                                              const std::string& path)
      -> ModuleNode& {
    for (auto& child : node.children) {
      if (path.starts_with(child.path + "/")) return parent_for(child, path);
    }
    return node;
  };
  for (std::size_t i = 1; i < paths.size(); ++i) {
    ModuleNode node;
    node.path = paths[i];
    parent_for(root, paths[i]).children.push_back(std::move(node));
  }
  return root;
}

void collect_nodes(ModuleNode& node, std::vector<ModuleNode*>& out) {
  out.push_back(&node);
  for (auto& child : node.children) collect_nodes(child, out);
}

}  // namespace

std::vector<fs::path> discover_modules(const fs::path& root, std::vector<Warning>& warnings) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("project root is not a readable directory: " + root.string());
  fs::directory_iterator probe(root, ec);
  if (ec) throw IoError("cannot read project root " + root.string() + ": " + ec.message());

  const fs::path normalized = root.lexically_normal();
  std::vector<fs::path> modules;
  std::set<std::string> seen;
  collect_modules(normalized, normalized, modules, seen, warnings);
  return modules;
}

bool is_license_file_name(std::string_view file_name) {
  const std::string name = lower(file_name);
  const auto dot = name.find('.');
  const std::string stem = name.substr(0, dot);
  const std::string ext = dot == std::string::npos ? "" : name.substr(dot);
  static const std::set<std::string> kStems = {"license", "licence", "copying", "unlicense"};
  static const std::set<std::string> kExtensions = {"", ".txt", ".md", ".rst"};
  return kStems.contains(stem) && kExtensions.contains(ext);
}

std::optional<fs::path> find_license_file(const fs::path& dir, std::vector<Warning>& warnings) {
  std::vector<std::string> candidates;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (is_license_file_name(name) && entry.is_regular_file(ec)) candidates.push_back(name);
  }
  if (ec) {
    warnings.push_back({dir.generic_string(), "cannot list directory: " + ec.message()});
    return std::nullopt;
  }
  if (candidates.empty()) return std::nullopt;
  std::sort(candidates.begin(), candidates.end(), [](const std::string& a, const std::string& b) {
    const bool a_plain = lower(a) == "license";
    const bool b_plain = lower(b) == "license";
    if (a_plain != b_plain) return a_plain;
    return a < b;
  });
  if (candidates.size() > 1) {
    std::string list;
    for (const auto& c : candidates) list += (list.empty() ? "" : ", ") + c;
    warnings.push_back({dir.generic_string(), "multiple license files (" + list + "); using " + candidates.front()});
  }
  return dir / candidates.front();
}

void apply_inheritance(ModuleNode& node, LicenseId parent_license) {
  node.effective_license = node.declared_license ? node.declared_license->detection.license : parent_license;
  for (auto& child : node.children) apply_inheritance(child, node.effective_license);
}

ScanReport scan(const fs::path& root, const Detector& detector) {
  ScanReport report;
  const fs::path base = root.lexically_normal();
  const auto dirs = discover_modules(base, report.warnings);

  std::vector<std::string> paths;
  for (const auto& dir : dirs) paths.push_back(relative_name(base, dir));
  report.root = build_tree(paths);

  std::vector<ModuleNode*> nodes;
  collect_nodes(report.root, nodes);

  // Detection per module runs in parallel; warnings are merged in tree order.
  std::vector<std::vector<Warning>> module_warnings(nodes.size());
  detail::parallel_for(nodes.size(), detail::hardware_workers(), [&](std::size_t i) {
    ModuleNode& node = *nodes[i];
    auto& warnings = module_warnings[i];
    const fs::path dir = node.path == "." ? base : base / node.path;
    std::vector<Warning> local;
    auto file = find_license_file(dir, local);
    for (auto& w : local) w.path = node.path;
    warnings.insert(warnings.end(), local.begin(), local.end());
    if (!file) return;
    const std::string rel = relative_name(base, *file);
    std::string text;
    try {
      text = read_text_file(*file);
    } catch (const IoError& e) {
      warnings.push_back({rel, e.what()});
      return;
    }
    node.declared_license = DeclaredLicense{rel, detector.detect(text)};
    const auto& detection = node.declared_license->detection;
    if (detection.license == LicenseId::kUnknown) {
      std::string message = "license file not recognized";
      if (detection.runner_up) {
        char score[16];
        std::snprintf(score, sizeof score, "%.3f", detection.runner_up->second);
        message += " (closest: " + std::string(render(detection.runner_up->first)) + " " + score + ")";
      }
      warnings.push_back({rel, message});
    }
  });
  for (auto& w : module_warnings) report.warnings.insert(report.warnings.end(), w.begin(), w.end());

  apply_inheritance(report.root);
  return report;
}

std::vector<const ModuleNode*> flatten(const ModuleNode& root) {
  std::vector<const ModuleNode*> out;
  std::function<void(const ModuleNode&)> walk = [&](const ModuleNode& node) {
    out.push_back(&node);
    for (const auto& child : node.children) walk(child);
  };
  walk(root);
  return out;
}

const ModuleNode* find_module(const ModuleNode& root, std::string_view path) {
  std::string key = fs::path(path.empty() ? "." : path).lexically_normal().generic_string();
  if (key.size() > 1 && key.back() == '/') key.pop_back();
  if (key.empty() || key == "./") key = ".";
  for (const ModuleNode* node : flatten(root)) {
    if (node->path == key) return node;
  }
  return nullptr;
}

ModuleNode* find_module(ModuleNode& root, std::string_view path) {
  return const_cast<ModuleNode*>(find_module(static_cast<const ModuleNode&>(root), path));
}

}  // namespace lichen
