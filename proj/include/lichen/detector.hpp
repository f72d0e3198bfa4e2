#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "lichen/classifier.hpp"
#include "lichen/corpus.hpp"
#include "lichen/license_id.hpp"

namespace lichen {

enum class DetectionMethod { kClassifier, kDice, kDeclaredName, kProvider };

std::string_view render(DetectionMethod method);

struct DetectionResult {
  LicenseId license = LicenseId::kUnknown;
  DetectionMethod method = DetectionMethod::kDice;
  // Dice coefficient or classifier posterior. For Unknown, the best score
  // observed (below the threshold that applies to `method`).
  double score = 0.0;
  // Best-scoring license when `license` is Unknown, otherwise the second best.
  std::optional<std::pair<LicenseId, double>> runner_up;

  friend bool operator==(const DetectionResult&, const DetectionResult&) = default;
};

inline constexpr double kDiceThreshold = 0.98;

// Scores `text` against every corpus word set. Accepts the best license when
// its coefficient is >= kDiceThreshold; equal scores go to the lexicographically
// smaller SPDX id. Empty input is always Unknown.
DetectionResult detect_dice(std::string_view text, const LicenseCorpus& corpus);

// Runs the classifier; Unknown unless the top posterior reaches the model's
// threshold.
DetectionResult classify(std::string_view text, const ClassifierModel& model);

// Classifier first, Dice coefficient when the classifier abstains.
class Detector {
 public:
  Detector(const LicenseCorpus& corpus, const ClassifierModel& model)
      : corpus_(&corpus), model_(&model) {}

  // Built-in corpus and model.
  static const Detector& builtin();

  DetectionResult detect(std::string_view text) const;
  DetectionResult detect_dice(std::string_view text) const { return lichen::detect_dice(text, *corpus_); }
  DetectionResult classify(std::string_view text) const { return lichen::classify(text, *model_); }

  const LicenseCorpus& corpus() const { return *corpus_; }
  const ClassifierModel& model() const { return *model_; }

 private:
  const LicenseCorpus* corpus_;
  const ClassifierModel* model_;
};

}  // namespace lichen
