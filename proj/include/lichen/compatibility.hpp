#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lichen/build_files.hpp"
#include "lichen/corpus.hpp"
#include "lichen/error.hpp"
#include "lichen/project_scanner.hpp"

namespace lichen {

enum class ViolationKind { kLibraryVsModule, kSubmoduleVsParent };

std::string_view render(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  LicenseId subject_license;  // the library's or the submodule's
  LicenseId context_license;  // the module's or the parent's (may be None)
  std::string module_path;
  std::optional<Coordinates> dependency;  // set iff kind is library-vs-module

  friend bool operator==(const Violation&, const Violation&) = default;
};

// A module licensed `module_license` uses a library licensed
// `library_license`. A violation when the module license is outside the
// library's compatibility set; None fails every set. Unknown on either side
// is not a violation but appends a caveat message.
std::optional<Violation> check_library(const LicenseCorpus& corpus, LicenseId module_license,
                                       LicenseId library_license, std::vector<std::string>& caveats);

// A submodule declares `child_license` under a parent whose effective license
// is `parent_license`; checked like a library of the parent.
std::optional<Violation> check_submodule(const LicenseCorpus& corpus, LicenseId parent_license,
                                         LicenseId child_license, std::vector<std::string>& caveats);

struct TreeCheck {
  std::vector<Violation> violations;
  std::vector<Warning> caveats;
};

// Every (module, dependency) pair and every (parent, child with a declared
// license) edge. Ordered by module path, then the submodule check before the
// module's dependencies, then dependency order.
TreeCheck check_tree(const LicenseCorpus& corpus, const ModuleNode& root);

// A license that limits what a module may be licensed under, with its origin
// ("com.example:lib:1.0 in app", "submodule core").
struct Constraint {
  LicenseId license;
  std::string origin;
};

struct Suggestion {
  std::string module_path;
  LicenseSet candidates;
  std::optional<LicenseId> recommended;
  bool conflicted = false;
  // Some library license was Unknown and could not constrain the result.
  bool unknown_caveat = false;
  std::vector<Constraint> constraints;
  // Pairs of constraining licenses whose compatibility sets are disjoint.
  std::vector<std::pair<LicenseId, LicenseId>> conflicting_pairs;
};

// Intersection of the compatibility sets of `constraints`, starting from all
// supported licenses; recommended is its most permissive member.
Suggestion suggest_from(const LicenseCorpus& corpus, std::vector<Constraint> constraints,
                        std::string module_path = ".");

// Constraints on the license of `module`: libraries of the module and of
// every descendant that would inherit its license, plus the declared
// licenses of the first descendants that carry their own license file.
std::vector<Constraint> license_constraints(const ModuleNode& module);

Suggestion suggest(const LicenseCorpus& corpus, const ModuleNode& module);

}  // namespace lichen
