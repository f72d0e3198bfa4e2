#include <cstdlib>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "lichen/cli.hpp"
#include "lichen/classifier.hpp"
#include "lichen/corpus.hpp"
#include "support.hpp"

using namespace lichen;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string project(const char* name) { return (testing::fixtures_dir() / "projects" / name).string(); }
std::string provider_dir() { return (testing::fixtures_dir() / "provider").string(); }
std::string text(const char* name) { return (testing::fixtures_dir() / "texts" / name).string(); }

// A writable copy of a fixture project.
struct ProjectCopy {
  testing::TempDir dir;
  fs::path root;
  explicit ProjectCopy(const char* name) : root(dir.path() / name) {
    fs::copy(project(name), root, fs::copy_options::recursive);
  }
};

Run scan(const std::string& root, std::vector<std::string> extra = {}) {
  std::vector<std::string> args = {"scan", root, "--fixtures-dir", provider_dir(), "--format", "json"};
  args.insert(args.end(), extra.begin(), extra.end());
  return run(args);
}

}  // namespace

TEST_CASE("scan exit codes") {
  const auto clean = scan(project("clean"));
  CHECK(clean.code == 0);
  CHECK(json::parse(clean.out)["violations"].empty());

  const auto agpl = scan(project("agpl_under_apache"));
  CHECK(agpl.code == 1);
  const auto report = json::parse(agpl.out);
  REQUIRE(report["violations"].size() == 1);
  CHECK(report["violations"][0]["kind"] == "library-vs-module");
  CHECK(report["violations"][0]["dependency"] == "org.example:agpl-lib:2.0");
  CHECK(report["violations"][0]["subject_license"] == "AGPL-3.0-only");
  CHECK(report["violations"][0]["context_license"] == "Apache-2.0");

  CHECK(scan(project("agpl_under_apache"), {"--fail-on", "never"}).code == 0);
  const auto missing = scan("/nonexistent/project");
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error:") != std::string::npos);
}

TEST_CASE("scan report content") {
  const auto r = scan(project("maven_multi"));
  const auto report = json::parse(r.out);
  CHECK(report["format_version"] == 1);
  CHECK(report["matrix_version"] == LicenseCorpus::builtin().version());
  CHECK(report["project_license"] == "MIT");
  REQUIRE(report["modules"].size() == 3);
  CHECK(report["modules"][1]["path"] == "core");
  CHECK(report["modules"][1]["declared_license"].is_null());
  CHECK(report["modules"][1]["effective_license"] == "MIT");
  const auto& junit = report["modules"][1]["dependencies"][0];
  CHECK(junit["coordinates"] == "junit:junit:4.13.2");
  CHECK(junit["resolved_license"] == "EPL-1.0");
  CHECK(junit["homepage"] == "http://junit.org");
  CHECK(junit["evidence"][0]["source"] == "provider");
  CHECK(junit["evidence"][0]["detail"] == "Eclipse Public License 1.0");
  CHECK(report["modules"][2]["declared_license"]["file"] == "app/LICENSE");
  // No absolute paths leak into the report.
  CHECK(r.out.find(testing::fixtures_dir().string()) == std::string::npos);
}

TEST_CASE("scan output is deterministic") {
  for (const char* name : {"maven_multi", "gradle_nested", "gpl_conflict"}) {
    CHECK(scan(project(name)).out == scan(project(name)).out);
    const auto a = run({"scan", project(name), "--fixtures-dir", provider_dir(), "--fail-on", "never"});
    const auto b = run({"scan", project(name), "--fixtures-dir", provider_dir(), "--fail-on", "never"});
    CHECK(a.out == b.out);
    CHECK(a.code == 0);
  }
}

TEST_CASE("detect") {
  const auto mit = run({"detect", (testing::data_dir() / "licenses" / "MIT.txt").string()});
  CHECK(mit.code == 0);
  CHECK(mit.out.starts_with("MIT ("));
  const auto mpl = run({"detect", (testing::data_dir() / "licenses" / "MPL-1.0.txt").string()});
  CHECK(mpl.out == "MPL-1.0 (dice, 1.000)\n");
  const auto prose = run({"detect", text("prose.txt")});
  CHECK(prose.code == 0);
  CHECK(prose.out.starts_with("Unknown"));
  CHECK(run({"detect", text("empty.txt")}).out.starts_with("Unknown"));
  CHECK(run({"detect", "/nonexistent/file"}).code == 2);
  const auto as_json = json::parse(run({"detect", text("prose.txt"), "--format", "json"}).out);
  CHECK(as_json["license"] == "Unknown");
}

TEST_CASE("suggest") {
  const auto agpl = run({"suggest", project("mit_agpl"), "--fixtures-dir", provider_dir()});
  CHECK(agpl.code == 0);
  CHECK(agpl.out.find("recommended: AGPL-3.0-only") != std::string::npos);
  CHECK(agpl.out.find("[x] AGPL-3.0-only") != std::string::npos);
  CHECK(agpl.out.find("[ ] MIT") != std::string::npos);

  const auto none = run({"suggest", project("no_deps"), "--fixtures-dir", provider_dir()});
  CHECK(none.out.find("recommended: MIT") != std::string::npos);

  const auto conflict = run({"suggest", project("gpl_conflict"), "--fixtures-dir", provider_dir()});
  CHECK(conflict.code == 1);
  CHECK(conflict.out.find("GPL-2.0-only and GPL-3.0-only") != std::string::npos);

  const auto app = json::parse(run({"suggest", project("maven_multi"), "app", "--fixtures-dir", provider_dir(),
                                    "--format", "json"}).out);
  CHECK(app["module"] == "app");
  CHECK(app["unknown_caveat"] == true);

  CHECK(run({"suggest", project("mit_agpl"), "nope", "--fixtures-dir", provider_dir()}).code == 2);
}

TEST_CASE("create-license") {
  SUBCASE("writes the recommended license and the scan becomes clean") {
    ProjectCopy copy("mit_agpl");
    const auto r = run({"create-license", copy.root.string(), "--fixtures-dir", provider_dir()});
    CHECK(r.code == 0);
    CHECK(r.out == "wrote LICENSE (AGPL-3.0-only)\n");
    CHECK(r.err.empty());
    const std::string written = testing::read_file(copy.root / "LICENSE");
    CHECK(written == testing::canonical_text(LicenseId::kAgpl3Only));
    CHECK(written.back() == '\n');
    CHECK(written.find('\r') == std::string::npos);
    const auto after = scan(copy.root.string());
    CHECK(after.code == 0);
    CHECK(json::parse(after.out)["project_license"] == "AGPL-3.0-only");
  }
  SUBCASE("explicit license with a resulting violation") {
    ProjectCopy copy("mit_agpl");
    const auto r = run({"create-license", copy.root.string(), "--license", "MIT", "--fixtures-dir", provider_dir()});
    CHECK(r.code == 0);
    CHECK(testing::read_file(copy.root / "LICENSE") == testing::canonical_text(LicenseId::kMit));
    CHECK(r.err.find("warning: .: library org.example:agpl-lib:2.0 (AGPL-3.0-only) cannot be used under MIT") !=
          std::string::npos);
    CHECK(scan(copy.root.string()).code == 1);
  }
  SUBCASE("conflicted projects are refused") {
    ProjectCopy copy("gpl_conflict");
    const auto r = run({"create-license", copy.root.string(), "--fixtures-dir", provider_dir()});
    CHECK(r.code == 1);
    CHECK_FALSE(fs::exists(copy.root / "LICENSE"));
    CHECK(r.err.find("GPL-2.0-only required by org.example:gpl2-lib:1.0") != std::string::npos);
    CHECK(r.err.find("GPL-3.0-only required by org.example:gpl3-lib:1.0") != std::string::npos);
  }
  SUBCASE("existing license files need --force") {
    ProjectCopy copy("clean");
    const auto before = testing::read_file(copy.root / "LICENSE");
    CHECK(run({"create-license", copy.root.string(), "--fixtures-dir", provider_dir()}).code == 2);
    CHECK(testing::read_file(copy.root / "LICENSE") == before);
    CHECK(run({"create-license", copy.root.string(), "--force", "--fixtures-dir", provider_dir()}).code == 0);
    CHECK(testing::read_file(copy.root / "LICENSE") == testing::canonical_text(LicenseId::kMit));
  }
  SUBCASE("bad ids and modules") {
    ProjectCopy copy("no_deps");
    CHECK(run({"create-license", copy.root.string(), "--license", "WTFPL"}).code == 2);
    CHECK(run({"create-license", copy.root.string(), "missing"}).code == 2);
  }
}

TEST_CASE("hints") {
  const auto gradle = run({"hints", (testing::fixtures_dir() / "build_files" / "gradle" / "build.gradle").string(),
                           "--fixtures-dir", provider_dir()});
  CHECK(gradle.code == 0);
  CHECK(gradle.out ==
        "build.gradle:10: com.google.guava:guava:31.0-jre  Apache-2.0 (provider)\n"
        "build.gradle:11: junit:junit:4.13.2  EPL-1.0 (provider)\n");
  const auto pom = json::parse(run({"hints", (testing::fixtures_dir() / "build_files" / "maven" / "pom.xml").string(),
                                    "--fixtures-dir", provider_dir(), "--format", "json"}).out);
  REQUIRE(pom.size() == 2);
  CHECK(pom[0]["line"] == 9);
  CHECK(pom[1]["line"] == 15);
  CHECK(pom[1]["license"] == "MIT");
  const auto empty = run({"hints", (testing::fixtures_dir() / "build_files" / "empty" / "pom.xml").string()});
  CHECK(empty.code == 0);
  CHECK(empty.out.empty());
  CHECK(run({"hints", text("prose.txt")}).code == 2);
}

TEST_CASE("diff") {
  const auto same = run({"diff", (testing::data_dir() / "licenses" / "BSD-2-Clause.txt").string()});
  CHECK(same.code == 0);
  CHECK(same.out.find("no differences") != std::string::npos);
  const auto holder = run({"diff", text("mit_holder.txt")});
  CHECK(holder.code == 1);
  CHECK(holder.out.find("[-year copyright holders-] {+2024 jane doe+}") != std::string::npos);
  CHECK(run({"diff", text("prose.txt")}).code == 2);
  CHECK(run({"diff", text("prose.txt"), "--license", "MIT"}).code == 1);
}

TEST_CASE("usage errors and options") {
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"scan", project("clean"), "--format", "xml"}).code == 2);
  CHECK(run({"scan", project("clean"), "--provider", "live"}).code == 2);
  CHECK(run({"scan", project("clean"), "--provider", "off", "--fixtures-dir", provider_dir()}).code == 2);
  CHECK(run({"scan", project("clean"), "--fixtures-dir", "/nonexistent"}).code == 2);
  CHECK(run({"detect", text("prose.txt"), "--threshold", "2"}).code == 2);

  // Without a provider the libraries stay Unknown: caveats, no violations.
  const auto offline = run({"scan", project("agpl_under_apache"), "--format", "json"});
  CHECK(offline.code == 0);
  CHECK(json::parse(offline.out)["modules"][0]["dependencies"][1]["resolved_license"] == "Unknown");

  // A model threshold of 1 hands marginal texts to the Dice stage.
  const auto dice = run({"detect", (testing::data_dir() / "licenses" / "ISC.txt").string(), "--threshold", "1"});
  CHECK(dice.out.find("ISC (") == 0);

  testing::TempDir dir;
  testing::write_file(dir.path() / "model.txt", ClassifierModel::builtin().serialize());
  testing::write_file(dir.path() / "broken.txt", "lichen-classifier 1\nthreshold x\n");
  CHECK(run({"detect", text("prose.txt"), "--model", (dir.path() / "model.txt").string()}).code == 0);
  CHECK(run({"detect", text("prose.txt"), "--model", (dir.path() / "broken.txt").string()}).code == 2);
  testing::write_file(dir.path() / "matrix" / "license_data.ini", "version = 1\n");
  CHECK(run({"detect", text("prose.txt"), "--matrix-dir", (dir.path() / "matrix").string()}).code == 2);
}

TEST_CASE("live provider with the cache directory from the environment") {
  httplib::Server server;
  int hits = 0;
  server.Get(R"(/package/(.+))", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    if (req.matches[1] == "org.example:agpl-lib:2.0") {
      res.set_content(R"({"license_name": "AGPL-3.0-only", "homepage": null})", "application/json");
    } else {
      res.set_content(R"({"license_name": "MIT", "homepage": null})", "application/json");
    }
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::jthread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  testing::TempDir cache;
  ::setenv(kCacheDirEnv, cache.path().c_str(), 1);
  const std::string url = "http://127.0.0.1:" + std::to_string(port);
  const auto first = run({"scan", project("agpl_under_apache"), "--provider-url", url, "--format", "json"});
  CHECK(first.code == 1);
  CHECK(hits == 2);
  CHECK(fs::is_regular_file(cache.path() / "org.example__agpl-lib__2.0.json"));
  const auto second = run({"scan", project("agpl_under_apache"), "--provider", "live", "--provider-url", url,
                           "--format", "json"});
  CHECK(hits == 2);
  CHECK(second.out == first.out);
  ::unsetenv(kCacheDirEnv);
  server.stop();
}
