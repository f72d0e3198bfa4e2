#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lichen/license_id.hpp"

namespace lichen {

// Sparse feature vector: (vocabulary index, value), ordered by index.
using FeatureVector = std::vector<std::pair<std::size_t, double>>;

// Multinomial logistic regression over a count-vectorized bag of words.
//
// Text is tokenized with token_sequence(), counted against the vocabulary,
// scaled sublinearly (log1p) and L2-normalized. Each class has one weight
// vector plus a bias; scores go through a softmax to give posteriors.
class ClassifierModel {
 public:
  static constexpr int kFormatVersion = 1;

  ClassifierModel() = default;
  ClassifierModel(std::vector<LicenseId> classes, std::vector<std::string> vocabulary,
                  double posterior_threshold);

  // Parses the text model format. Throws ModelError when malformed.
  static ClassifierModel parse(std::string_view text);
  std::string serialize() const;

  // The model produced at build time.
  static const ClassifierModel& builtin();

  const std::vector<LicenseId>& classes() const { return classes_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::size_t class_count() const { return classes_.size(); }
  std::size_t feature_count() const { return vocabulary_.size(); }

  double posterior_threshold() const { return threshold_; }
  void set_posterior_threshold(double threshold);

  // Row-major [feature][class].
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& bias() { return bias_; }
  const std::vector<double>& bias() const { return bias_; }

  FeatureVector featurize(std::string_view text) const;

  // Softmax posteriors over classes(); sums to 1.
  std::vector<double> posteriors(const FeatureVector& features) const;

 private:
  void validate() const;

  std::vector<LicenseId> classes_;
  std::vector<std::string> vocabulary_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<double> weights_;
  std::vector<double> bias_;
  double threshold_ = 0.8;
};

}  // namespace lichen
