#include "lichen/training.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "lichen/detector.hpp"
#include "lichen/tokens.hpp"

namespace lichen::training {
namespace {

// std distributions are implementation-defined; these keep the datasets
// identical across standard libraries.
std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <typename T, std::size_t N>
const T& choose(std::mt19937_64& rng, const std::array<T, N>& items) {
  return items[pick(rng, N)];
}

constexpr auto kHolders = std::to_array<std::string_view>({
    "Jane Doe",           "The Example Authors", "Acme Corporation",   "Initech LLC",
    "Globex Inc.",        "Max Mustermann",      "Contributors",       "Open Tools Foundation",
    "Erika Musterfrau",   "Duck Labs GmbH",      "Sam Q. Public",      "Umbrella Software Ltd"});

constexpr auto kHeaders = std::to_array<std::string_view>({
    "This project is distributed under the following terms.",
    "Licensed to the project contributors.",
    "The license for this module follows.",
    "Copyright notices for bundled components are listed in NOTICE.",
    "Please read these terms carefully before using the library.",
    "Third party components may be covered by other licenses.",
    "See the documentation for build instructions.",
    "Questions about licensing can be sent to the maintainers."});

constexpr auto kProseWords = std::to_array<std::string_view>({
    "the", "of", "and", "to", "in", "a", "is", "that", "for", "it", "as", "was", "with", "be", "by",
    "on", "not", "he", "this", "are", "or", "his", "from", "at", "which", "but", "have", "an", "they",
    "you", "were", "her", "she", "there", "one", "all", "we", "their", "has", "been", "would", "more",
    "will", "when", "who", "so", "if", "out", "up", "into", "them", "no", "time", "some", "could",
    "than", "then", "its", "only", "other", "new", "these", "two", "may", "first", "any", "like",
    "now", "my", "such", "over", "also", "back", "after", "use", "our", "work", "project", "build",
    "code", "release", "version", "user", "users", "team", "weather", "garden", "river", "mountain",
    "coffee", "morning", "evening", "train", "station", "city", "village", "music", "piano", "book",
    "library", "chapter", "story", "friend", "family", "dinner", "kitchen", "window", "summer",
    "winter", "spring", "autumn", "forest", "bridge", "market", "school", "teacher", "student",
    "question", "answer", "idea", "plan", "meeting", "report", "data", "model", "test", "result",
    "figure", "table", "method", "system", "network", "server", "client", "request", "response",
    "file", "files", "folder", "document", "copy", "change", "changes", "support", "help", "issue",
    "feature", "performance", "memory", "speed", "quickly", "slowly", "carefully", "happily",
    "walked", "found", "made", "said", "went", "came", "took", "saw", "knew", "thought", "looked"});

std::string substitute_copyright(std::string_view text, std::mt19937_64& rng) {
  std::ostringstream line;
  line << "Copyright (c) " << 1995 + pick(rng, 30) << ' ' << choose(rng, kHolders);
  std::string out;
  bool replaced = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    auto current = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    std::string lower(current);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (!replaced && lower.find("copyright") != std::string::npos &&
        (lower.find('<') != std::string::npos || lower.find("(c)") != std::string::npos)) {
      out += line.str();
      replaced = true;
    } else {
      out += current;
    }
    if (eol == std::string_view::npos) break;
    out += '\n';
    pos = eol + 1;
  }
  if (!replaced && unit(rng) < 0.5) out = line.str() + "\n\n" + out;
  return out;
}

std::string rewrap(std::string_view text, std::size_t width) {
  std::string out;
  std::size_t column = 0;
  std::size_t pos = 0;
  bool paragraph_break = false;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      std::size_t newlines = 0;
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
        newlines += text[pos] == '\n';
        ++pos;
      }
      paragraph_break = newlines >= 2;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    const auto word = text.substr(pos, end - pos);
    if (paragraph_break && !out.empty()) {
      out += "\n\n";
      column = 0;
    } else if (column > 0 && column + 1 + word.size() > width) {
      out += '\n';
      column = 0;
    } else if (column > 0) {
      out += ' ';
      ++column;
    }
    out += word;
    column += word.size();
    paragraph_break = false;
    pos = end;
  }
  out += '\n';
  return out;
}

std::string drop_tokens(std::string_view text, double rate, std::mt19937_64& rng) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      out += text[pos++];
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    if (unit(rng) >= rate) out.append(text.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

}  // namespace

std::string augment(std::string_view text, std::mt19937_64& rng) {
  std::string out = substitute_copyright(text, rng);
  if (unit(rng) < 0.4) out = std::string(choose(rng, kHeaders)) + "\n\n" + out;
  if (unit(rng) < 0.4) out = out + "\n" + std::string(choose(rng, kHeaders)) + "\n";
  if (unit(rng) < 0.5) out = rewrap(out, 50 + pick(rng, 51));
  return drop_tokens(out, 0.01 + 0.04 * unit(rng), rng);
}

std::string generate_prose(std::mt19937_64& rng) {
  const std::size_t words = 20 + pick(rng, 600);
  std::string out;
  bool sentence_start = true;
  for (std::size_t i = 0; i < words; ++i) {
    std::string word(choose(rng, kProseWords));
    if (sentence_start) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    out += word;
    sentence_start = unit(rng) < 0.08;
    out += sentence_start ? ". " : (unit(rng) < 0.05 ? ", " : " ");
    if (sentence_start && unit(rng) < 0.2) out += "\n\n";
  }
  return out;
}

std::vector<Example> build_dataset(const LicenseCorpus& corpus, std::uint64_t seed, std::size_t per_class) {
  std::mt19937_64 rng(seed);
  std::vector<Example> examples;
  for (LicenseId id : kSupportedLicenses) {
    const auto& record = corpus.lookup(id);
    const std::optional<LicenseId> label =
        record.in_classifier ? std::optional<LicenseId>(id) : std::nullopt;
    for (std::size_t i = 0; i < per_class; ++i) {
      examples.push_back(Example{augment(record.canonical_text, rng), label});
    }
  }
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    examples.push_back(Example{generate_prose(rng), std::nullopt});
  }
  return examples;
}

ClassifierModel train(const LicenseCorpus& corpus, const std::vector<Example>& examples, const Options& options) {
  std::set<std::string> vocab_set;
  for (LicenseId id : kSupportedLicenses) {
    const auto& tokens = corpus.lookup(id).word_set.tokens();
    vocab_set.insert(tokens.begin(), tokens.end());
  }
  const auto classes = corpus.classifier_licenses();
  ClassifierModel model(classes, std::vector<std::string>(vocab_set.begin(), vocab_set.end()),
                        options.posterior_threshold);
  const std::size_t k = classes.size();

  std::vector<FeatureVector> features;
  std::vector<std::vector<double>> targets;
  for (const auto& ex : examples) {
    features.push_back(model.featurize(ex.text));
    std::vector<double> target(k, 1.0 / static_cast<double>(k));
    if (ex.label) {
      auto it = std::find(classes.begin(), classes.end(), *ex.label);
      std::fill(target.begin(), target.end(), 0.0);
      target[static_cast<std::size_t>(it - classes.begin())] = 1.0;
    }
    targets.push_back(std::move(target));
  }

  auto& w = model.weights();
  auto& b = model.bias();
  std::vector<double> gw(w.size()), gb(k), mw(w.size()), vw(w.size()), mb(k), vb(k);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  const double n = static_cast<double>(examples.size());
  double beta1_t = 1.0, beta2_t = 1.0;

  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    std::fill(gb.begin(), gb.end(), 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) gw[j] = options.l2 * w[j];
    for (std::size_t i = 0; i < features.size(); ++i) {
      const auto p = model.posteriors(features[i]);
      for (std::size_t c = 0; c < k; ++c) {
        const double g = (p[c] - targets[i][c]) / n;
        gb[c] += g;
        for (const auto& [index, value] : features[i]) gw[index * k + c] += g * value;
      }
    }
    beta1_t *= kBeta1;
    beta2_t *= kBeta2;
    auto step = [&](std::vector<double>& param, const std::vector<double>& grad, std::vector<double>& m,
                    std::vector<double>& v) {
      for (std::size_t j = 0; j < param.size(); ++j) {
        m[j] = kBeta1 * m[j] + (1 - kBeta1) * grad[j];
        v[j] = kBeta2 * v[j] + (1 - kBeta2) * grad[j] * grad[j];
        param[j] -= options.learning_rate * (m[j] / (1 - beta1_t)) / (std::sqrt(v[j] / (1 - beta2_t)) + kEps);
      }
    };
    step(w, gw, mw, vw);
    step(b, gb, mb, vb);
  }
  return model;
}

Evaluation evaluate(const ClassifierModel& model, const std::vector<Example>& examples) {
  Evaluation eval;
  for (const auto& ex : examples) {
    const auto result = classify(ex.text, model);
    const LicenseId expected = ex.label.value_or(LicenseId::kUnknown);
    ++eval.total;
    if (result.license == expected) ++eval.correct;
    if (!ex.label) {
      ++eval.abstain_total;
      if (result.license == LicenseId::kUnknown) ++eval.abstain_correct;
    }
  }
  return eval;
}

}  // namespace lichen::training
