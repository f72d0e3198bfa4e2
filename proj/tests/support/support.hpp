#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lichen/license_id.hpp"

namespace testing {

std::filesystem::path fixtures_dir();
std::filesystem::path data_dir();

// Raw bytes of data/licenses/<id>.txt, read from the source tree rather than
// the embedded copy.
std::string canonical_text(lichen::LicenseId id);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Minimal zip writer for building jars in tests.
class ZipBuilder {
 public:
  void add(std::string name, std::string content, bool deflate = true);
  std::string bytes() const;
  void write(const std::filesystem::path& path) const;

 private:
  struct Item {
    std::string name;
    std::string content;
    bool deflate;
  };
  std::vector<Item> items_;
};

// Word set by a regex scan, independent of lichen's tokenizer.
std::set<std::string> oracle_words(std::string_view text);
double oracle_dice(const std::set<std::string>& x, const std::set<std::string>& y);

// Length of a longest common subsequence by the full quadratic table.
std::size_t oracle_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Replaces every occurrence of `k` distinct words of the text's word set with
// fresh tokens absent from all license texts. Returns the mutated text.
std::string substitute_unique_tokens(std::string_view text, std::size_t k, std::mt19937_64& rng);

struct PropertyResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0 && cases > 0; }
};

PropertyResult check_dice_properties(std::size_t cases, std::uint64_t seed);
PropertyResult check_suggestion_soundness(std::size_t cases, std::uint64_t seed);
PropertyResult check_suggestion_monotonicity(std::size_t cases, std::uint64_t seed);
PropertyResult check_inheritance(std::size_t cases, std::uint64_t seed);
PropertyResult check_diff_against_lcs(std::size_t cases, std::uint64_t seed);

// Writes a Maven project: root pom plus one module directory per entry of
// `modules` (root is "."), each with the listed dependency coordinates.
struct ProjectSpec {
  std::map<std::string, std::vector<std::string>> module_dependencies;  // path -> "g:a:v"
  std::map<std::string, lichen::LicenseId> license_files;               // path -> license
};
void write_maven_project(const std::filesystem::path& root, const ProjectSpec& spec);

// Writes a fixture provider answer.
void write_provider_answer(const std::filesystem::path& dir, const std::string& coordinates,
                           const std::optional<std::string>& license_name,
                           const std::optional<std::string>& homepage = std::nullopt);

}  // namespace testing
