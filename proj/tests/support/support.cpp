#include "support.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "lichen/compatibility.hpp"
#include "lichen/corpus.hpp"
#include "lichen/project_scanner.hpp"
#include "lichen/tokens.hpp"
#include "lichen/word_diff.hpp"

namespace fs = std::filesystem;
using lichen::LicenseId;

namespace testing {

fs::path fixtures_dir() { return LICHEN_TEST_FIXTURES; }
fs::path data_dir() { return LICHEN_TEST_DATA; }

std::string canonical_text(LicenseId id) {
  return read_file(data_dir() / "licenses" / (std::string(lichen::render(id)) + ".txt"));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

TempDir::TempDir() {
  std::string pattern = (fs::temp_directory_path() / "lichen-test-XXXXXX").string();
  if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

void put16(std::string& out, unsigned v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
}

void put32(std::string& out, unsigned long v) {
  put16(out, static_cast<unsigned>(v & 0xffff));
  put16(out, static_cast<unsigned>((v >> 16) & 0xffff));
}

std::string raw_deflate(const std::string& data) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw std::runtime_error("deflateInit2 failed");
  }
  std::string out(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw std::runtime_error("deflate failed");
  out.resize(zs.total_out);
  return out;
}

}  // namespace

void ZipBuilder::add(std::string name, std::string content, bool deflate) {
  items_.push_back({std::move(name), std::move(content), deflate});
}

std::string ZipBuilder::bytes() const {
  std::string out, central;
  for (const auto& item : items_) {
    const unsigned long crc =
        crc32(0, reinterpret_cast<const Bytef*>(item.content.data()), static_cast<uInt>(item.content.size()));
    const std::string body = item.deflate ? raw_deflate(item.content) : item.content;
    const unsigned method = item.deflate ? 8 : 0;
    const unsigned long offset = out.size();

    put32(out, 0x04034b50);
    put16(out, 20);
    put16(out, 0);
    put16(out, method);
    put16(out, 0);
    put16(out, 0x21);
    put32(out, crc);
    put32(out, body.size());
    put32(out, item.content.size());
    put16(out, static_cast<unsigned>(item.name.size()));
    put16(out, 0);
    out += item.name;
    out += body;

    put32(central, 0x02014b50);
    put16(central, 20);
    put16(central, 20);
    put16(central, 0);
    put16(central, method);
    put16(central, 0);
    put16(central, 0x21);
    put32(central, crc);
    put32(central, body.size());
    put32(central, item.content.size());
    put16(central, static_cast<unsigned>(item.name.size()));
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, 0);
    put32(central, offset);
    central += item.name;
  }
  const unsigned long central_offset = out.size();
  out += central;
  put32(out, 0x06054b50);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<unsigned>(items_.size()));
  put16(out, static_cast<unsigned>(items_.size()));
  put32(out, central.size());
  put32(out, central_offset);
  put16(out, 0);
  return out;
}

void ZipBuilder::write(const fs::path& path) const { write_file(path, bytes()); }

std::set<std::string> oracle_words(std::string_view text) {
  static const std::regex kWord("[A-Za-z0-9]+");
  std::set<std::string> out;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kWord); it != std::sregex_iterator(); ++it) {
    std::string w = it->str();
    for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out.insert(std::move(w));
  }
  return out;
}

double oracle_dice(const std::set<std::string>& x, const std::set<std::string>& y) {
  if (x.empty() && y.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& w : x) common += y.count(w);
  return 2.0 * static_cast<double>(common) / static_cast<double>(x.size() + y.size());
}

std::size_t oracle_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t[a.size()][b.size()];
}

std::string substitute_unique_tokens(std::string_view text, std::size_t k, std::mt19937_64& rng) {
  const auto words = oracle_words(text);
  std::vector<std::string> pool(words.begin(), words.end());
  std::shuffle(pool.begin(), pool.end(), rng);
  std::map<std::string, std::string> replacement;
  for (std::size_t i = 0; i < std::min(k, pool.size()); ++i) replacement[pool[i]] = "qzxmut" + std::to_string(i);

  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isalnum(static_cast<unsigned char>(text[i]))) {
      out += text[i++];
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
    std::string word(text.substr(i, j - i));
    std::string lower = word;
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = replacement.find(lower);
    out += it == replacement.end() ? word : it->second;
    i = j;
  }
  return out;
}

namespace {

const std::vector<std::string>& small_vocabulary() {
  static const std::vector<std::string> words = [] {
    std::vector<std::string> w;
    for (int i = 0; i < 30; ++i) w.push_back("w" + std::to_string(i));
    return w;
  }();
  return words;
}

std::set<std::string> random_set(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(0, 15), pick(0, small_vocabulary().size() - 1);
  std::set<std::string> s;
  for (std::size_t n = size(rng), i = 0; i < n; ++i) s.insert(small_vocabulary()[pick(rng)]);
  return s;
}

lichen::TokenSet to_token_set(const std::set<std::string>& s) { return lichen::TokenSet({s.begin(), s.end()}); }

void fail(PropertyResult& r, const std::string& what) {
  if (r.failures++ == 0) r.first_failure = what;
}

LicenseId random_library(std::mt19937_64& rng, bool allow_unknown) {
  std::uniform_int_distribution<std::size_t> pick(0, lichen::kSupportedLicenseCount - (allow_unknown ? 0 : 1));
  const std::size_t i = pick(rng);
  return i == lichen::kSupportedLicenseCount ? LicenseId::kUnknown : lichen::kSupportedLicenses[i];
}

std::vector<lichen::Constraint> random_constraints(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, 5);
  std::vector<lichen::Constraint> out;
  for (int n = count(rng), i = 0; i < n; ++i) out.push_back({random_library(rng, true), "lib" + std::to_string(i)});
  return out;
}

std::string set_text(const lichen::LicenseSet& s) {
  std::string out;
  for (auto id : s.to_vector()) out += std::string(lichen::render(id)) + " ";
  return out;
}

}  // namespace

PropertyResult check_dice_properties(std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult r;
  for (; r.cases < cases; ++r.cases) {
    const auto x = random_set(rng), y = random_set(rng);
    const auto tx = to_token_set(x), ty = to_token_set(y);
    const double xy = lichen::dice(tx, ty), yx = lichen::dice(ty, tx);
    if (xy != yx) fail(r, "asymmetric");
    if (!(xy >= 0.0 && xy <= 1.0)) fail(r, "out of bounds");
    if (lichen::dice(tx, tx) != 1.0) fail(r, "dice(x,x) != 1");
    if (xy != oracle_dice(x, y)) fail(r, "differs from the set-intersection oracle");
  }

  // Removing distinct words from a canonical text never raises its score.
  const auto& corpus = lichen::LicenseCorpus::builtin();
  for (std::size_t i = 0; i < cases / 10; ++i, ++r.cases) {
    const auto id = lichen::kSupportedLicenses[i % lichen::kSupportedLicenseCount];
    const auto& full = corpus.lookup(id).word_set;
    auto words = full.tokens();
    std::shuffle(words.begin(), words.end(), rng);
    double previous = 1.0;
    for (std::size_t removed = 0; removed <= words.size(); removed += 1 + words.size() / 25) {
      const double d = lichen::dice(lichen::TokenSet({words.begin() + static_cast<std::ptrdiff_t>(removed), words.end()}), full);
      if (d > previous) fail(r, "score rose after removing words from " + std::string(lichen::render(id)));
      previous = d;
    }
  }
  return r;
}

PropertyResult check_suggestion_soundness(std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& corpus = lichen::LicenseCorpus::builtin();
  PropertyResult r;
  for (; r.cases < cases; ++r.cases) {
    const auto constraints = random_constraints(rng);
    const auto s = lichen::suggest_from(corpus, constraints);
    std::vector<std::string> caveats;
    for (LicenseId module_license : lichen::kSupportedLicenses) {
      bool clean = true;
      for (const auto& c : constraints) {
        if (lichen::check_library(corpus, module_license, c.license, caveats)) clean = false;
      }
      // Candidates are exactly the licenses with no violation.
      if (clean != s.candidates.contains(module_license)) {
        fail(r, std::string(lichen::render(module_license)) + " misclassified; candidates " + set_text(s.candidates));
      }
    }
    if (s.conflicted != s.candidates.empty()) fail(r, "conflicted flag disagrees with candidates");
    if (!s.candidates.empty()) {
      LicenseId best = LicenseId::kUnknown;
      for (LicenseId id : s.candidates.to_vector()) {
        if (best == LicenseId::kUnknown || corpus.lookup(id).permissiveness_rank < corpus.lookup(best).permissiveness_rank) {
          best = id;
        }
      }
      if (s.recommended != best) fail(r, "recommended is not the rank minimum");
    } else if (s.recommended) {
      fail(r, "recommendation on an empty candidate set");
    }
  }
  return r;
}

PropertyResult check_suggestion_monotonicity(std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& corpus = lichen::LicenseCorpus::builtin();
  PropertyResult r;
  for (; r.cases < cases; ++r.cases) {
    auto constraints = random_constraints(rng);
    const auto before = lichen::suggest_from(corpus, constraints).candidates;
    constraints.push_back({random_library(rng, true), "added"});
    const auto after = lichen::suggest_from(corpus, constraints).candidates;
    if (after.intersect(before) != after) fail(r, "candidate set grew: " + set_text(before) + "-> " + set_text(after));
  }
  return r;
}

PropertyResult check_inheritance(std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PropertyResult r;
  for (; r.cases < cases; ++r.cases) {
    std::uniform_int_distribution<std::size_t> size(1, 14);
    std::bernoulli_distribution declared(0.4);
    const std::size_t n = size(rng);
    std::vector<std::size_t> parent(n, 0);
    std::vector<std::optional<LicenseId>> license(n);
    std::vector<std::string> path(n);
    path[0] = ".";
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) {
        parent[i] = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        path[i] = (parent[i] == 0 ? "" : path[parent[i]] + "/") + "m" + std::to_string(i);
      }
      if (declared(rng)) license[i] = random_library(rng, true);
    }

    std::vector<lichen::ModuleNode> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
      nodes[i].path = path[i];
      if (license[i]) nodes[i].declared_license = lichen::DeclaredLicense{path[i] + "/LICENSE", {*license[i]}};
    }
    // Assemble bottom-up: children have larger indices than their parents.
    std::vector<std::vector<std::size_t>> kids(n);
    for (std::size_t i = 1; i < n; ++i) kids[parent[i]].push_back(i);
    std::function<lichen::ModuleNode(std::size_t)> build = [&](std::size_t i) {
      lichen::ModuleNode node = nodes[i];
      for (std::size_t k : kids[i]) node.children.push_back(build(k));
      return node;
    };
    lichen::ModuleNode root = build(0);
    lichen::apply_inheritance(root);

    for (std::size_t i = 0; i < n; ++i) {
      LicenseId expected = LicenseId::kNone;
      for (std::size_t j = i;; j = parent[j]) {
        if (license[j]) {
          expected = *license[j];
          break;
        }
        if (j == 0) break;
      }
      const auto* node = lichen::find_module(root, path[i]);
      if (!node) {
        fail(r, "module " + path[i] + " missing from tree");
      } else if (node->effective_license != expected) {
        fail(r, "module " + path[i] + " has " + std::string(lichen::render(node->effective_license)) + ", expected " +
                    std::string(lichen::render(expected)));
      }
    }
  }
  return r;
}

PropertyResult check_diff_against_lcs(std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  static const std::vector<std::string> alphabet = {"a", "b", "c", "d"};
  PropertyResult r;
  for (; r.cases < cases; ++r.cases) {
    std::uniform_int_distribution<std::size_t> len(0, 20), pick(0, alphabet.size() - 1);
    std::vector<std::string> a(len(rng)), b(len(rng));
    for (auto& w : a) w = alphabet[pick(rng)];
    for (auto& w : b) w = alphabet[pick(rng)];

    const auto diff = lichen::diff_words(a, b);
    std::vector<std::string> from, to;
    std::size_t equal = 0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
      const auto& run = diff[i];
      if (run.words.empty()) fail(r, "empty run");
      if (i > 0 && diff[i - 1].op == run.op) fail(r, "adjacent runs share an operation");
      if (i > 0 && diff[i - 1].op == lichen::DiffOp::kInsert && run.op == lichen::DiffOp::kDelete) {
        fail(r, "insert run before delete run");
      }
      if (run.op != lichen::DiffOp::kInsert) from.insert(from.end(), run.words.begin(), run.words.end());
      if (run.op != lichen::DiffOp::kDelete) to.insert(to.end(), run.words.begin(), run.words.end());
      if (run.op == lichen::DiffOp::kEqual) equal += run.words.size();
    }
    if (from != a || to != b) fail(r, "diff does not reproduce its inputs");
    if (equal != oracle_lcs(a, b)) fail(r, "equal words differ from the LCS length");
    if (lichen::has_changes(diff) != (a != b)) fail(r, "has_changes disagrees with equality");
  }
  return r;
}

void write_maven_project(const fs::path& root, const ProjectSpec& spec) {
  for (const auto& [module, deps] : spec.module_dependencies) {
    std::ostringstream pom;
    pom << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<project>\n  <modelVersion>4.0.0</modelVersion>\n"
        << "  <groupId>com.example.generated</groupId>\n  <artifactId>"
        << (module == "." ? std::string("root") : fs::path(module).filename().string())
        << "</artifactId>\n  <version>1.0</version>\n";
    if (module == ".") {
      pom << "  <modules>\n";
      for (const auto& [other, unused] : spec.module_dependencies) {
        if (other != ".") pom << "    <module>" << other << "</module>\n";
      }
      pom << "  </modules>\n";
    }
    pom << "  <dependencies>\n";
    for (const auto& coordinate : deps) {
      const auto first = coordinate.find(':'), second = coordinate.find(':', first + 1);
      pom << "    <dependency>\n      <groupId>" << coordinate.substr(0, first) << "</groupId>\n      <artifactId>"
          << coordinate.substr(first + 1, second - first - 1) << "</artifactId>\n      <version>"
          << coordinate.substr(second + 1) << "</version>\n    </dependency>\n";
    }
    pom << "  </dependencies>\n</project>\n";
    write_file(root / module / "pom.xml", pom.str());
  }
  for (const auto& [module, id] : spec.license_files) write_file(root / module / "LICENSE", canonical_text(id));
}

void write_provider_answer(const fs::path& dir, const std::string& coordinates,
                           const std::optional<std::string>& license_name, const std::optional<std::string>& homepage) {
  std::string name = coordinates;
  std::size_t pos;
  while ((pos = name.find(':')) != std::string::npos) name.replace(pos, 1, "__");
  auto quoted = [](const std::optional<std::string>& v) { return v ? "\"" + *v + "\"" : std::string("null"); };
  write_file(dir / (name + ".json"),
             "{\"license_name\": " + quoted(license_name) + ", \"homepage\": " + quoted(homepage) + "}\n");
}

}  // namespace testing
