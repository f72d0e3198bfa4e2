#include "lichen/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"


#ifndef LICHEN_VERSION
#define LICHEN_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace lichen {
namespace {

std::string id(LicenseId license) { return std::string(render(license)); }

// Four decimals keep reports readable and stable across platforms.
double rounded(double score) { return std::round(score * 10000.0) / 10000.0; }

std::string fixed3(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", score);
  return buf;
}

ordered_json detection_json(const DetectionResult& d) {
  ordered_json j;
  j["license"] = id(d.license);
  j["method"] = std::string(render(d.method));
  j["score"] = rounded(d.score);
  if (d.runner_up) {
    j["runner_up"] = ordered_json{{"license", id(d.runner_up->first)}, {"score", rounded(d.runner_up->second)}};
  } else {
    j["runner_up"] = nullptr;
  }
  return j;
}

ordered_json dependency_json(const Dependency& dep) {
  ordered_json j;
  j["coordinates"] = dep.coordinates.str();
  j["group"] = dep.coordinates.group;
  j["artifact"] = dep.coordinates.artifact;
  j["version"] = dep.coordinates.version;
  j["scope"] = dep.scope;
  j["test"] = dep.test;
  j["line"] = dep.line;
  j["resolved_license"] = id(dep.resolved);
  j["homepage"] = dep.homepage ? ordered_json(*dep.homepage) : ordered_json(nullptr);
  ordered_json evidence = ordered_json::array();
  for (const auto& e : dep.evidence) {
    ordered_json item;
    item["source"] = std::string(render(e.source));
    item["detail"] = e.detail;
    item["detection"] = detection_json(e.detection);
    evidence.push_back(std::move(item));
  }
  j["evidence"] = std::move(evidence);
  return j;
}

ordered_json module_json(const ModuleNode& node) {
  ordered_json j;
  j["path"] = node.path;
  if (node.declared_license) {
    j["declared_license"] = ordered_json{{"file", node.declared_license->file},
                                         {"detection", detection_json(node.declared_license->detection)}};
  } else {
    j["declared_license"] = nullptr;
  }
  j["effective_license"] = id(node.effective_license);
  ordered_json children = ordered_json::array();
  for (const auto& child : node.children) children.push_back(child.path);
  j["children"] = std::move(children);
  ordered_json deps = ordered_json::array();
  for (const auto& dep : node.dependencies) deps.push_back(dependency_json(dep));
  j["dependencies"] = std::move(deps);
  return j;
}

ordered_json license_list(const LicenseSet& set) {
  ordered_json out = ordered_json::array();
  for (LicenseId l : set.to_vector()) out.push_back(id(l));
  return out;
}

ordered_json suggestion_json(const Suggestion& s) {
  ordered_json item;
  item["module"] = s.module_path;
  item["candidates"] = license_list(s.candidates);
  item["recommended"] = s.recommended ? ordered_json(id(*s.recommended)) : ordered_json(nullptr);
  item["conflicted"] = s.conflicted;
  item["unknown_caveat"] = s.unknown_caveat;
  ordered_json constraints = ordered_json::array();
  for (const auto& c : s.constraints) constraints.push_back({{"license", id(c.license)}, {"origin", c.origin}});
  item["constraints"] = std::move(constraints);
  ordered_json pairs = ordered_json::array();
  for (const auto& [a, b] : s.conflicting_pairs) pairs.push_back(ordered_json::array({id(a), id(b)}));
  item["conflicting_pairs"] = std::move(pairs);
  return item;
}

std::size_t count_dependencies(const ModuleNode& root) {
  std::size_t n = 0;
  for (const ModuleNode* node : flatten(root)) n += node->dependencies.size();
  return n;
}

}  // namespace

std::string_view tool_version() { return LICHEN_VERSION; }

void attach_dependencies(const fs::path& project_root, ModuleNode& root, const AnalysisContext& context,
                         std::vector<Warning>& warnings) {
  std::vector<ModuleNode*> nodes;
  for (const ModuleNode* node : flatten(root)) nodes.push_back(const_cast<ModuleNode*>(node));

  std::vector<DeclaredDependency> declared;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const fs::path dir = nodes[i]->path == "." ? project_root : project_root / nodes[i]->path;
    for (auto& d : extract_dependencies(dir, warnings, nodes[i]->path)) {
      declared.push_back(std::move(d));
      owner.push_back(i);
    }
  }
  DependencyResolver resolver(context.detector, context.names, context.provider, context.resolver);
  auto resolved = resolver.resolve_all(declared, warnings);
  for (auto* node : nodes) node->dependencies.clear();
  for (std::size_t k = 0; k < resolved.size(); ++k) nodes[owner[k]]->dependencies.push_back(std::move(resolved[k]));
}

void evaluate(const LicenseCorpus& corpus, Report& report) {
  auto check = check_tree(corpus, report.root);
  report.violations = std::move(check.violations);
  report.warnings.insert(report.warnings.end(), check.caveats.begin(), check.caveats.end());
  report.suggestions.clear();
  for (const ModuleNode* node : flatten(report.root)) {
    if (node == &report.root || node->declared_license) report.suggestions.push_back(suggest(corpus, *node));
  }
}

Report analyze(const fs::path& project_root, const AnalysisContext& context) {
  const fs::path root = project_root.lexically_normal();
  ScanReport scanned = scan(root, context.detector);
  Report report;
  report.tool_version = std::string(tool_version());
  report.matrix_version = context.detector.corpus().version();
  report.root = std::move(scanned.root);
  report.warnings = std::move(scanned.warnings);
  attach_dependencies(root, report.root, context, report.warnings);
  evaluate(context.detector.corpus(), report);
  return report;
}

std::string render_json(const DetectionResult& detection) { return detection_json(detection).dump(2) + "\n"; }

std::string render_json(const Suggestion& suggestion) { return suggestion_json(suggestion).dump(2) + "\n"; }

std::string render_json(const Report& report) {
  ordered_json j;
  j["format_version"] = kReportFormatVersion;
  j["tool_version"] = report.tool_version;
  j["matrix_version"] = report.matrix_version;
  j["project_license"] = id(report.root.effective_license);

  ordered_json modules = ordered_json::array();
  for (const ModuleNode* node : flatten(report.root)) modules.push_back(module_json(*node));
  j["modules"] = std::move(modules);

  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations) {
    ordered_json item;
    item["kind"] = std::string(render(v.kind));
    item["module"] = v.module_path;
    item["subject_license"] = id(v.subject_license);
    item["context_license"] = id(v.context_license);
    item["dependency"] = v.dependency ? ordered_json(v.dependency->str()) : ordered_json(nullptr);
    violations.push_back(std::move(item));
  }
  j["violations"] = std::move(violations);

  ordered_json suggestions = ordered_json::array();
  for (const auto& s : report.suggestions) suggestions.push_back(suggestion_json(s));
  j["suggestions"] = std::move(suggestions);

  ordered_json warnings = ordered_json::array();
  for (const auto& w : report.warnings) warnings.push_back({{"path", w.path}, {"message", w.message}});
  j["warnings"] = std::move(warnings);

  j["summary"] = {{"modules", flatten(report.root).size()},
                  {"dependencies", count_dependencies(report.root)},
                  {"violations", report.violations.size()},
                  {"warnings", report.warnings.size()}};
  return j.dump(2) + "\n";
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  out << "lichen " << report.tool_version << " (license data " << report.matrix_version << ")\n\n";
  out << "Modules\n";
  for (const ModuleNode* node : flatten(report.root)) {
    out << "  " << node->path << ": " << render(node->effective_license);
    if (node->declared_license) {
      const auto& d = node->declared_license->detection;
      out << " from " << node->declared_license->file << " (" << render(d.method) << ", " << fixed3(d.score) << ")";
    } else if (node != &report.root) {
      out << " (inherited)";
    } else {
      out << " (no license file)";
    }
    out << "\n";
    for (const auto& dep : node->dependencies) {
      out << "    " << dep.coordinates.str() << ": " << render(dep.resolved);
      for (const auto& e : dep.evidence) {
        if (e.detection.license == dep.resolved) {
          out << " [" << render(e.source) << "]";
          break;
        }
      }
      out << "\n";
    }
  }

  out << "\nViolations";
  if (report.violations.empty()) out << ": none";
  out << "\n";
  for (const auto& v : report.violations) {
    if (v.kind == ViolationKind::kLibraryVsModule) {
      out << "  " << v.module_path << ": library " << v.dependency->str() << " (" << render(v.subject_license)
          << ") cannot be used under " << render(v.context_license) << "\n";
    } else {
      out << "  " << v.module_path << ": submodule license " << render(v.subject_license)
          << " is not compatible with parent license " << render(v.context_license) << "\n";
    }
  }

  out << "\nSuggestions\n";
  for (const auto& s : report.suggestions) {
    out << "  " << s.module_path << ": ";
    if (s.conflicted) {
      out << "conflict, no supported license satisfies every library";
      for (const auto& [a, b] : s.conflicting_pairs) out << "; " << render(a) << " vs " << render(b);
    } else {
      out << render(*s.recommended) << " (" << s.candidates.size() << " compatible)";
    }
    if (s.unknown_caveat) out << "; some library licenses are unknown";
    out << "\n";
  }

  if (!report.warnings.empty()) {
    out << "\nWarnings\n";
    for (const auto& w : report.warnings) out << "  " << w.path << ": " << w.message << "\n";
  }
  return out.str();
}

}  // namespace lichen
