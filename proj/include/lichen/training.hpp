#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "lichen/classifier.hpp"
#include "lichen/corpus.hpp"

namespace lichen::training {

// `label` is empty for texts the classifier must abstain on: licenses
// outside its class set and non-license prose.
struct Example {
  std::string text;
  std::optional<LicenseId> label;
};

// Copyright-line substitution, header/footer insertion, line rewrapping and
// 1-5% token dropout, each drawn from `rng`.
std::string augment(std::string_view text, std::mt19937_64& rng);

// Random English-like prose that is not a license.
std::string generate_prose(std::mt19937_64& rng);

// `per_class` augmented copies of every supported license text (labelled
// for classifier licenses, unlabelled otherwise) plus 2*per_class prose
// samples. Deterministic in `seed`.
std::vector<Example> build_dataset(const LicenseCorpus& corpus, std::uint64_t seed, std::size_t per_class);

struct Options {
  std::size_t iterations = 400;
  double learning_rate = 0.2;
  double l2 = 1e-6;
  double posterior_threshold = 0.8;
};

// Full-batch Adam on softmax cross-entropy. Labelled examples get a one-hot
// target; unlabelled ones a uniform target, which teaches the model to
// spread its posterior (and so abstain) on them.
ClassifierModel train(const LicenseCorpus& corpus, const std::vector<Example>& examples,
                      const Options& options);

struct Evaluation {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t abstain_total = 0;
  std::size_t abstain_correct = 0;
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

// A prediction is correct when classify() returns the label, or Unknown for
// an unlabelled example.
Evaluation evaluate(const ClassifierModel& model, const std::vector<Example>& examples);

// Held-out split seeds used by the trainer and the acceptance suite.
inline constexpr std::uint64_t kTrainSeed = 20211;
inline constexpr std::uint64_t kHeldOutSeed = 90417;
inline constexpr std::size_t kTrainPerClass = 40;
inline constexpr std::size_t kHeldOutPerClass = 25;

}  // namespace lichen::training
