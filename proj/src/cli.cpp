#include "lichen/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lichen/compatibility.hpp"
#include "lichen/report.hpp"
#include "lichen/word_diff.hpp"

namespace fs = std::filesystem;

namespace lichen {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string format = "text";
  std::string provider;
  std::string provider_url;
  std::string fixtures_dir;
  std::string model;
  std::string matrix_dir;
  std::string cache_dir;
  std::string artifacts_dir;
  std::string patterns;
  std::optional<double> threshold;
  std::string fail_on = "violations";
  bool force = false;
  std::string license;
  std::string target;
  std::string module = ".";
};

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// The provider mode follows from --provider, or from whichever of
// --provider-url / --fixtures-dir is given; off otherwise.
std::string provider_mode(const Options& o) {
  std::string mode = o.provider;
  if (mode.empty()) {
    if (!o.provider_url.empty() && !o.fixtures_dir.empty()) {
      throw UsageError("--provider-url and --fixtures-dir select different providers; pass --provider");
    }
    mode = !o.provider_url.empty() ? "live" : !o.fixtures_dir.empty() ? "fixtures" : "off";
  }
  if (mode == "live" && o.provider_url.empty()) throw UsageError("--provider live needs --provider-url");
  if (mode == "fixtures" && o.fixtures_dir.empty()) throw UsageError("--provider fixtures needs --fixtures-dir");
  if (mode != "live" && !o.provider_url.empty()) throw UsageError("--provider-url is only used with --provider live");
  if (mode != "fixtures" && !o.fixtures_dir.empty()) {
    throw UsageError("--fixtures-dir is only used with --provider fixtures");
  }
  return mode;
}

fs::path default_cache_dir() {
  if (const char* dir = std::getenv(kCacheDirEnv); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "lichen";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "lichen";
  return fs::temp_directory_path() / "lichen-cache";
}

std::optional<fs::path> default_artifact_repository() {
  const char* home = std::getenv("HOME");
  if (!home || !*home) return std::nullopt;
  fs::path repo = fs::path(home) / ".m2" / "repository";
  std::error_code ec;
  if (fs::is_directory(repo, ec)) return repo;
  return std::nullopt;
}

// Loaded data and services for one run. Not movable: the detector points
// into it.
class Runtime {
 public:
  explicit Runtime(const Options& o)
      : corpus_(o.matrix_dir.empty() ? LicenseCorpus::builtin() : LicenseCorpus::load(fs::path(o.matrix_dir))),
        model_(o.model.empty() ? ClassifierModel::builtin() : ClassifierModel::parse(read_text_file(o.model))),
        detector_(corpus_, model_),
        names_(o.patterns.empty() ? LicenseNameTable::builtin() : LicenseNameTable::load(fs::path(o.patterns))) {
    if (o.threshold) model_.set_posterior_threshold(*o.threshold);
    const std::string mode = provider_mode(o);
    if (mode == "live") {
      const fs::path cache = o.cache_dir.empty() ? default_cache_dir() : fs::path(o.cache_dir);
      provider_ = std::make_unique<CachingProvider>(std::make_unique<HttpProvider>(o.provider_url), cache);
    } else if (mode == "fixtures") {
      provider_ = std::make_unique<FixtureProvider>(o.fixtures_dir);
    } else {
      provider_ = std::make_unique<DisabledProvider>();
    }
    resolver_.artifact_repository =
        o.artifacts_dir.empty() ? default_artifact_repository() : std::optional<fs::path>(o.artifacts_dir);
  }
  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  const LicenseCorpus& corpus() const { return corpus_; }
  const Detector& detector() const { return detector_; }
  AnalysisContext context() { return AnalysisContext{detector_, names_, *provider_, resolver_}; }

 private:
  LicenseCorpus corpus_;
  ClassifierModel model_;
  Detector detector_;
  LicenseNameTable names_;
  std::unique_ptr<MetadataProvider> provider_;
  ResolverOptions resolver_;
};

LicenseId parse_license_option(const std::string& value) {
  const LicenseId id = parse_spdx(value);
  if (!is_supported(id)) throw UsageError("unsupported license id '" + value + "'");
  return id;
}

std::string canonical_file_text(const LicenseRecord& record) {
  std::string text;
  text.reserve(record.canonical_text.size() + 1);
  for (std::size_t i = 0; i < record.canonical_text.size(); ++i) {
    const char c = record.canonical_text[i];
    if (c == '\r') {
      if (i + 1 < record.canonical_text.size() && record.canonical_text[i + 1] == '\n') continue;
      text += '\n';
    } else {
      text += c;
    }
  }
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ' || text.back() == '\t')) text.pop_back();
  return text + "\n";
}

bool in_subtree(const std::string& path, const std::string& module) {
  return module == "." || path == module || path.starts_with(module + "/");
}

std::string describe(const Violation& v) {
  std::ostringstream s;
  if (v.kind == ViolationKind::kLibraryVsModule) {
    s << v.module_path << ": library " << v.dependency->str() << " (" << render(v.subject_license)
      << ") cannot be used under " << render(v.context_license);
  } else {
    s << v.module_path << ": submodule license " << render(v.subject_license)
      << " is not compatible with parent license " << render(v.context_license);
  }
  return s.str();
}

// Names each irreconcilable pair and where its two licenses come from.
std::string explain_conflict(const Suggestion& s) {
  std::ostringstream out;
  out << "no supported license is compatible with every library of module " << s.module_path << "\n";
  auto origins = [&](LicenseId id) {
    std::string list;
    for (const auto& c : s.constraints) {
      if (c.license == id) list += (list.empty() ? "" : ", ") + c.origin;
    }
    return list;
  };
  for (const auto& [a, b] : s.conflicting_pairs) {
    out << "  " << render(a) << " and " << render(b) << " have no module license in common\n";
    out << "    " << render(a) << " required by " << origins(a) << "\n";
    out << "    " << render(b) << " required by " << origins(b) << "\n";
  }
  return out.str();
}

const ModuleNode& require_module(const Report& report, const std::string& path) {
  const ModuleNode* node = find_module(report.root, path);
  if (!node) throw UsageError("no module '" + path + "' in the project");
  return *node;
}

int cmd_scan(const Options& o, std::ostream& out) {
  Runtime runtime(o);
  const Report report = analyze(o.target, runtime.context());
  out << (o.format == "json" ? render_json(report) : render_text(report));
  return !report.violations.empty() && o.fail_on == "violations" ? kExitFindings : kExitOk;
}

int cmd_detect(const Options& o, std::ostream& out) {
  Runtime runtime(o);
  const auto result = runtime.detector().detect(read_text_file(o.target));
  if (o.format == "json") {
    out << render_json(result);
  } else if (result.license == LicenseId::kUnknown) {
    out << "Unknown";
    if (result.runner_up) {
      out << " (closest: " << render(result.runner_up->first) << ", " << fixed3(result.runner_up->second) << ")";
    }
    out << "\n";
  } else {
    out << render(result.license) << " (" << render(result.method) << ", " << fixed3(result.score) << ")\n";
  }
  return kExitOk;
}

int cmd_suggest(const Options& o, std::ostream& out) {
  Runtime runtime(o);
  const Report report = analyze(o.target, runtime.context());
  const Suggestion s = suggest(runtime.corpus(), require_module(report, o.module));
  if (o.format == "json") {
    out << render_json(s);
    return s.conflicted ? kExitFindings : kExitOk;
  }
  out << "module " << s.module_path << "\n";
  if (s.conflicted) {
    out << "conflict: " << explain_conflict(s);
    return kExitFindings;
  }
  out << "compatible licenses:\n";
  for (LicenseId id : kSupportedLicenses) {
    out << "  " << (s.candidates.contains(id) ? "[x] " : "[ ] ") << render(id);
    if (s.recommended == id) out << "  (recommended)";
    out << "\n";
  }
  out << "recommended: " << render(*s.recommended) << "\n";
  if (s.unknown_caveat) out << "note: some library licenses are unknown and were not taken into account\n";
  return kExitOk;
}

int cmd_create_license(const Options& o, std::ostream& out, std::ostream& err) {
  Runtime runtime(o);
  Report report = analyze(o.target, runtime.context());
  const ModuleNode& module = require_module(report, o.module);
  const fs::path root = fs::path(o.target).lexically_normal();
  const fs::path dir = module.path == "." ? root : root / module.path;

  std::vector<Warning> ignored;
  if (auto existing = find_license_file(dir, ignored); existing && !o.force) {
    err << "error: " << existing->lexically_relative(root).generic_string()
        << " already exists; pass --force to replace it\n";
    return kExitFatal;
  }

  const Suggestion s = suggest(runtime.corpus(), module);
  LicenseId chosen;
  if (!o.license.empty()) {
    chosen = parse_license_option(o.license);
  } else if (s.conflicted) {
    err << "refusing to create a license: " << explain_conflict(s)
        << "pass --license to choose one anyway\n";
    return kExitFindings;
  } else {
    chosen = *s.recommended;
  }

  const std::string text = canonical_file_text(runtime.corpus().lookup(chosen));
  const fs::path file = dir / "LICENSE";
  {
    std::ofstream stream(file, std::ios::binary | std::ios::trunc);
    stream << text;
    if (!stream.flush()) throw IoError("cannot write " + file.string());
  }
  const std::string rel = file.lexically_relative(root).generic_string();

  // Re-check the tree as if it had been scanned with the new file.
  ModuleNode* node = find_module(report.root, module.path);
  node->declared_license = DeclaredLicense{rel, runtime.detector().detect(text)};
  apply_inheritance(report.root);
  std::vector<Violation> remaining;
  for (auto& v : check_tree(runtime.corpus(), report.root).violations) {
    if (in_subtree(v.module_path, module.path) || (v.kind == ViolationKind::kSubmoduleVsParent &&
                                                   v.module_path == module.path)) {
      remaining.push_back(std::move(v));
    }
  }

  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["module"] = module.path;
    j["file"] = rel;
    j["license"] = std::string(render(chosen));
    j["recommended"] = s.recommended ? nlohmann::ordered_json(std::string(render(*s.recommended)))
                                     : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json violations = nlohmann::ordered_json::array();
    for (const auto& v : remaining) violations.push_back(describe(v));
    j["violations"] = std::move(violations);
    out << j.dump(2) << "\n";
  } else {
    out << "wrote " << rel << " (" << render(chosen) << ")\n";
  }
  for (const auto& v : remaining) err << "warning: " << describe(v) << "\n";
  return kExitOk;
}

int cmd_hints(const Options& o, std::ostream& out) {
  const fs::path file = o.target;
  if (classify_build_file(file) == BuildFileKind::kUnrecognized ||
      classify_build_file(file) == BuildFileKind::kGradleSettings) {
    throw UsageError("not a Maven or Gradle build file: " + file.filename().string());
  }
  Runtime runtime(o);
  std::vector<Warning> warnings;
  const std::string shown = file.filename().string();
  const auto declared = read_build_file_dependencies(file, warnings, shown);
  const auto context = runtime.context();
  DependencyResolver resolver(context.detector, context.names, context.provider, context.resolver);
  const auto deps = resolver.resolve_all(declared, warnings);

  auto source_of = [](const Dependency& dep) -> std::string {
    for (const auto& e : dep.evidence) {
      if (e.detection.license == dep.resolved) return std::string(render(e.source));
    }
    return "none";
  };
  if (o.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& dep : deps) {
      j.push_back({{"line", dep.line},
                   {"coordinates", dep.coordinates.str()},
                   {"license", std::string(render(dep.resolved))},
                   {"source", source_of(dep)}});
    }
    out << j.dump(2) << "\n";
  } else {
    for (const auto& dep : deps) {
      out << shown << ":" << dep.line << ": " << dep.coordinates.str() << "  " << render(dep.resolved) << " ("
          << source_of(dep) << ")\n";
    }
    for (const auto& w : warnings) out << "warning: " << w.path << ": " << w.message << "\n";
  }
  return kExitOk;
}

int cmd_diff(const Options& o, std::ostream& out) {
  Runtime runtime(o);
  const std::string text = read_text_file(o.target);
  LicenseId id;
  if (!o.license.empty()) {
    id = parse_license_option(o.license);
  } else {
    id = runtime.detector().detect(text).license;
    if (id == LicenseId::kUnknown) {
      throw UsageError("could not recognize the license in " + fs::path(o.target).filename().string() +
                       "; pass --license to choose the text to compare with");
    }
  }
  const auto diff = diff_against_canonical(text, id, runtime.corpus());
  const bool changed = has_changes(diff);
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["license"] = std::string(render(id));
    j["changed"] = changed;
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& run : diff) {
      const char* op = run.op == DiffOp::kEqual ? "equal" : run.op == DiffOp::kDelete ? "delete" : "insert";
      runs.push_back({{"op", op}, {"words", run.words}});
    }
    j["runs"] = std::move(runs);
    out << j.dump(2) << "\n";
  } else {
    out << "comparing with the canonical " << render(id) << " text\n";
    out << (changed ? render_diff(diff) : "no differences\n");
  }
  return changed ? kExitFindings : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Detects the licenses of a Java project and its dependencies and checks their compatibility."};
  app.name("lichen");
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--provider", o.provider, "Package metadata provider (default: off)")
      ->check(CLI::IsMember({"live", "fixtures", "off"}));
  app.add_option("--provider-url", o.provider_url, "Base URL of the live metadata service");
  app.add_option("--fixtures-dir", o.fixtures_dir, "Directory of fixture provider answers")
      ->check(CLI::ExistingDirectory);
  app.add_option("--model", o.model, "Classifier model file")->check(CLI::ExistingFile);
  app.add_option("--matrix-dir", o.matrix_dir, "Directory overriding license data and texts")
      ->check(CLI::ExistingDirectory);
  app.add_option("--cache-dir", o.cache_dir, std::string("Provider cache directory (env ") + kCacheDirEnv + ")");
  app.add_option("--artifacts-dir", o.artifacts_dir, "Local Maven repository with dependency jars")
      ->check(CLI::ExistingDirectory);
  app.add_option("--patterns", o.patterns, "License name pattern table")->check(CLI::ExistingFile);
  app.add_option("--threshold", o.threshold, "Classifier posterior threshold")->check(CLI::Range(0.0, 1.0));

  auto* scan_cmd = app.add_subcommand("scan", "Scan a project and report violations");
  scan_cmd->add_option("project", o.target, "Project root")->required();
  scan_cmd->add_option("--fail-on", o.fail_on, "Exit 1 on violations or never")
      ->check(CLI::IsMember({"violations", "never"}));

  auto* detect_cmd = app.add_subcommand("detect", "Detect the license of a text file");
  detect_cmd->add_option("file", o.target, "License file")->required();

  auto* suggest_cmd = app.add_subcommand("suggest", "Suggest a license for a module");
  suggest_cmd->add_option("project", o.target, "Project root")->required();
  suggest_cmd->add_option("module", o.module, "Module path relative to the root");

  auto* create_cmd = app.add_subcommand("create-license", "Write a LICENSE file for a module");
  create_cmd->add_option("project", o.target, "Project root")->required();
  create_cmd->add_option("module", o.module, "Module path relative to the root");
  create_cmd->add_option("--license", o.license, "SPDX id to write instead of the suggestion");
  create_cmd->add_flag("--force", o.force, "Replace an existing license file");

  auto* hints_cmd = app.add_subcommand("hints", "List the license of each dependency of a build file");
  hints_cmd->add_option("build-file", o.target, "pom.xml or build.gradle(.kts)")->required()->check(
      CLI::ExistingFile);

  auto* diff_cmd = app.add_subcommand("diff", "Compare a license file with the canonical text");
  diff_cmd->add_option("file", o.target, "License file")->required();
  diff_cmd->add_option("--license", o.license, "SPDX id to compare with instead of the detected one");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*scan_cmd) return cmd_scan(o, out);
    if (*detect_cmd) return cmd_detect(o, out);
    if (*suggest_cmd) return cmd_suggest(o, out);
    if (*create_cmd) return cmd_create_license(o, out, err);
    if (*hints_cmd) return cmd_hints(o, out);
    if (*diff_cmd) return cmd_diff(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}

}  // namespace lichen
