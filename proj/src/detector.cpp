#include "lichen/detector.hpp"

#include <algorithm>

#include "lichen/tokens.hpp"

namespace lichen {
namespace {

struct Scored {
  LicenseId id;
  double score;
};

// Highest score first; equal scores in SPDX lexicographic order.
std::pair<Scored, std::optional<Scored>> top_two(std::vector<Scored> scored) {
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return render(a.id) < render(b.id);
  });
  std::optional<Scored> second;
  if (scored.size() > 1) second = scored[1];
  return {scored.front(), second};
}

DetectionResult decide(std::vector<Scored> scored, DetectionMethod method, bool accept_best) {
  auto [best, second] = top_two(std::move(scored));
  DetectionResult result;
  result.method = method;
  result.score = best.score;
  if (accept_best) {
    result.license = best.id;
    if (second) result.runner_up = std::make_pair(second->id, second->score);
  } else {
    result.license = LicenseId::kUnknown;
    result.runner_up = std::make_pair(best.id, best.score);
  }
  return result;
}

}  // namespace

std::string_view render(DetectionMethod method) {
  switch (method) {
    case DetectionMethod::kClassifier: return "classifier";
    case DetectionMethod::kDice: return "dice";
    case DetectionMethod::kDeclaredName: return "declared-name";
    case DetectionMethod::kProvider: return "provider";
  }
  return "dice";
}

DetectionResult detect_dice(std::string_view text, const LicenseCorpus& corpus) {
  const TokenSet tokens = normalize_tokens(text);
  std::vector<Scored> scored;
  for (LicenseId id : kSupportedLicenses) {
    scored.push_back({id, dice(tokens, corpus.lookup(id).word_set)});
  }
  const double best = std::max_element(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
                        return a.score < b.score;
                      })->score;
  return decide(std::move(scored), DetectionMethod::kDice, !tokens.empty() && best >= kDiceThreshold);
}

DetectionResult classify(std::string_view text, const ClassifierModel& model) {
  const auto posteriors = model.posteriors(model.featurize(text));
  std::vector<Scored> scored;
  for (std::size_t c = 0; c < model.class_count(); ++c) scored.push_back({model.classes()[c], posteriors[c]});
  const double best = *std::max_element(posteriors.begin(), posteriors.end());
  return decide(std::move(scored), DetectionMethod::kClassifier, best >= model.posterior_threshold());
}

DetectionResult Detector::detect(std::string_view text) const {
  DetectionResult result = classify(text);
  if (result.license != LicenseId::kUnknown) return result;
  return detect_dice(text);
}

}  // namespace lichen
