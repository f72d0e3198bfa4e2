#include "lichen/compatibility.hpp"

#include <algorithm>
#include <functional>

namespace lichen {
namespace {

std::string name(LicenseId id) { return std::string(render(id)); }

std::optional<Violation> check_pair(const LicenseCorpus& corpus, ViolationKind kind, LicenseId context,
                                    LicenseId subject, std::vector<std::string>& caveats) {
  const char* subject_role = kind == ViolationKind::kLibraryVsModule ? "library" : "submodule";
  const char* context_role = kind == ViolationKind::kLibraryVsModule ? "module" : "parent";
  if (subject == LicenseId::kUnknown) {
    caveats.push_back(std::string("unknown ") + subject_role + " license; compatibility not checked");
    return std::nullopt;
  }
  if (subject == LicenseId::kNone) return std::nullopt;
  if (context == LicenseId::kUnknown) {
    caveats.push_back(std::string("unknown ") + context_role + " license; compatibility with " + name(subject) +
                      " not checked");
    return std::nullopt;
  }
  if (corpus.lookup(subject).compatible_module_licenses.contains(context)) return std::nullopt;
  return Violation{kind, subject, context, {}, std::nullopt};
}

}  // namespace

std::string_view render(ViolationKind kind) {
  return kind == ViolationKind::kLibraryVsModule ? "library-vs-module" : "submodule-vs-parent";
}

std::optional<Violation> check_library(const LicenseCorpus& corpus, LicenseId module_license,
                                       LicenseId library_license, std::vector<std::string>& caveats) {
  return check_pair(corpus, ViolationKind::kLibraryVsModule, module_license, library_license, caveats);
}

std::optional<Violation> check_submodule(const LicenseCorpus& corpus, LicenseId parent_license,
                                         LicenseId child_license, std::vector<std::string>& caveats) {
  return check_pair(corpus, ViolationKind::kSubmoduleVsParent, parent_license, child_license, caveats);
}

TreeCheck check_tree(const LicenseCorpus& corpus, const ModuleNode& root) {
  struct Visit {
    const ModuleNode* node;
    const ModuleNode* parent;
  };
  std::vector<Visit> visits;
  std::function<void(const ModuleNode&, const ModuleNode*)> walk = [&](const ModuleNode& node,
                                                                      const ModuleNode* parent) {
    visits.push_back({&node, parent});
    for (const auto& child : node.children) walk(child, &node);
  };
  walk(root, nullptr);
  std::stable_sort(visits.begin(), visits.end(),
                   [](const Visit& a, const Visit& b) { return a.node->path < b.node->path; });

  TreeCheck out;
  for (const auto& [node, parent] : visits) {
    std::vector<std::string> caveats;
    if (parent && node->declared_license) {
      if (auto v = check_submodule(corpus, parent->effective_license, node->declared_license->detection.license,
                                   caveats)) {
        v->module_path = node->path;
        out.violations.push_back(std::move(*v));
      }
    }
    for (auto& c : caveats) out.caveats.push_back({node->path, std::move(c)});
    for (const auto& dep : node->dependencies) {
      caveats.clear();
      if (auto v = check_library(corpus, node->effective_license, dep.resolved, caveats)) {
        v->module_path = node->path;
        v->dependency = dep.coordinates;
        out.violations.push_back(std::move(*v));
      }
      for (auto& c : caveats) out.caveats.push_back({node->path, dep.coordinates.str() + ": " + c});
    }
  }
  return out;
}

Suggestion suggest_from(const LicenseCorpus& corpus, std::vector<Constraint> constraints, std::string module_path) {
  Suggestion s;
  s.module_path = std::move(module_path);
  s.candidates = LicenseSet::all_supported();
  std::vector<LicenseId> distinct;
  for (const auto& c : constraints) {
    if (!is_supported(c.license)) {
      s.unknown_caveat = s.unknown_caveat || c.license == LicenseId::kUnknown;
      continue;
    }
    s.candidates = s.candidates.intersect(corpus.lookup(c.license).compatible_module_licenses);
    if (std::find(distinct.begin(), distinct.end(), c.license) == distinct.end()) distinct.push_back(c.license);
  }
  s.constraints = std::move(constraints);
  if (!s.candidates.empty()) {
    s.recommended = corpus.most_permissive(s.candidates);
    return s;
  }
  s.conflicted = true;
  std::sort(distinct.begin(), distinct.end(), [](LicenseId a, LicenseId b) { return render(a) < render(b); });
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    for (std::size_t j = i + 1; j < distinct.size(); ++j) {
      const auto& a = corpus.lookup(distinct[i]).compatible_module_licenses;
      const auto& b = corpus.lookup(distinct[j]).compatible_module_licenses;
      if (a.intersect(b).empty()) s.conflicting_pairs.emplace_back(distinct[i], distinct[j]);
    }
  }
  return s;
}

std::vector<Constraint> license_constraints(const ModuleNode& module) {
  std::vector<Constraint> out;
  std::function<void(const ModuleNode&)> walk = [&](const ModuleNode& node) {
    const std::string where = node.path == "." ? "the root module" : node.path;
    for (const auto& dep : node.dependencies) {
      out.push_back({dep.resolved, dep.coordinates.str() + " in " + where});
    }
    for (const auto& child : node.children) {
      if (child.declared_license) {
        out.push_back({child.declared_license->detection.license, "submodule " + child.path});
      } else {
        walk(child);
      }
    }
  };
  walk(module);
  return out;
}

Suggestion suggest(const LicenseCorpus& corpus, const ModuleNode& module) {
  return suggest_from(corpus, license_constraints(module), module.path);
}

}  // namespace lichen
