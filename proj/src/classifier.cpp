#include "lichen/classifier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "lichen/error.hpp"
#include "lichen/tokens.hpp"

namespace lichen {
namespace {

constexpr std::string_view kMagic = "lichen-classifier";

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, int line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ModelError("model line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> fields_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

ClassifierModel::ClassifierModel(std::vector<LicenseId> classes, std::vector<std::string> vocabulary,
                                 double posterior_threshold)
    : classes_(std::move(classes)),
      vocabulary_(std::move(vocabulary)),
      weights_(vocabulary_.size() * classes_.size(), 0.0),
      bias_(classes_.size(), 0.0),
      threshold_(posterior_threshold) {
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) index_.emplace(vocabulary_[i], i);
  validate();
}

void ClassifierModel::validate() const {
  if (classes_.empty()) throw ModelError("model has no classes");
  std::set<LicenseId> distinct(classes_.begin(), classes_.end());
  if (distinct.size() != classes_.size()) throw ModelError("model lists a class twice");
  for (LicenseId id : classes_) {
    if (!is_supported(id)) throw ModelError("model class is not a supported license");
  }
  if (index_.size() != vocabulary_.size()) throw ModelError("model vocabulary has duplicate tokens");
  for (const auto& token : vocabulary_) {
    if (token.empty() || token_sequence(token) != std::vector<std::string>{token}) {
      throw ModelError("model vocabulary entry '" + token + "' is not a normalized token");
    }
  }
  if (weights_.size() != vocabulary_.size() * classes_.size() || bias_.size() != classes_.size()) {
    throw ModelError("model weight dimensions do not match");
  }
  if (!(threshold_ >= 0.0 && threshold_ <= 1.0)) throw ModelError("posterior threshold outside [0, 1]");
}

void ClassifierModel::set_posterior_threshold(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ModelError("posterior threshold outside [0, 1]");
  threshold_ = threshold;
}

ClassifierModel ClassifierModel::parse(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto eol = text.find('\n');
    lines.push_back(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
  }
  std::size_t pos = 0;
  int line_no = 0;
  auto next = [&]() -> std::vector<std::string_view> {
    while (pos < lines.size()) {
      line_no = static_cast<int>(pos) + 1;
      auto f = fields_of(lines[pos++]);
      if (!f.empty() && f.front().front() != '#') return f;
    }
    throw ModelError("model ends unexpectedly");
  };
  auto expect = [&](const std::vector<std::string_view>& f, std::string_view key, std::size_t arity) {
    if (f.front() != key || (arity != 0 && f.size() != arity + 1)) {
      throw ModelError("model line " + std::to_string(line_no) + ": expected '" + std::string(key) + "'");
    }
  };

  auto header = next();
  expect(header, kMagic, 1);
  if (header[1] != std::to_string(kFormatVersion)) throw ModelError("unsupported model format version");

  auto threshold_line = next();
  expect(threshold_line, "threshold", 1);
  const double threshold = parse_double(threshold_line[1], line_no);

  auto classes_line = next();
  expect(classes_line, "classes", 0);
  std::vector<LicenseId> classes;
  for (std::size_t i = 1; i < classes_line.size(); ++i) {
    const LicenseId id = parse_spdx(classes_line[i]);
    if (!is_supported(id)) throw ModelError("model class '" + std::string(classes_line[i]) + "' is unknown");
    classes.push_back(id);
  }
  if (classes.empty()) throw ModelError("model has no classes");

  auto vocab_line = next();
  expect(vocab_line, "vocabulary", 1);
  const double vocab_size_d = parse_double(vocab_line[1], line_no);
  if (vocab_size_d < 0 || vocab_size_d != std::floor(vocab_size_d)) throw ModelError("bad vocabulary size");
  const auto vocab_size = static_cast<std::size_t>(vocab_size_d);

  std::vector<std::string> vocabulary;
  std::vector<std::vector<double>> rows;
  vocabulary.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    auto f = next();
    if (f.size() != classes.size() + 1) {
      throw ModelError("model line " + std::to_string(line_no) + ": expected token and " +
                       std::to_string(classes.size()) + " weights");
    }
    vocabulary.emplace_back(f[0]);
    std::vector<double> row;
    for (std::size_t c = 0; c < classes.size(); ++c) row.push_back(parse_double(f[c + 1], line_no));
    rows.push_back(std::move(row));
  }
  auto bias_line = next();
  expect(bias_line, "bias", classes.size());
  auto end_line = next();
  expect(end_line, "end", 0);

  ClassifierModel model(std::move(classes), std::move(vocabulary), threshold);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), model.weights_.begin() + i * model.class_count());
  }
  for (std::size_t c = 0; c < model.class_count(); ++c) model.bias_[c] = parse_double(bias_line[c + 1], line_no);
  return model;
}

std::string ClassifierModel::serialize() const {
  std::ostringstream out;
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "threshold " << format_double(threshold_) << '\n';
  out << "classes";
  for (LicenseId id : classes_) out << ' ' << render(id);
  out << '\n';
  out << "vocabulary " << vocabulary_.size() << '\n';
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    out << vocabulary_[i];
    for (std::size_t c = 0; c < class_count(); ++c) out << ' ' << format_double(weights_[i * class_count() + c]);
    out << '\n';
  }
  out << "bias";
  for (double b : bias_) out << ' ' << format_double(b);
  out << "\nend\n";
  return out.str();
}

FeatureVector ClassifierModel::featurize(std::string_view text) const {
  std::map<std::size_t, double> counts;
  for (const auto& token : token_sequence(text)) {
    auto it = index_.find(token);
    if (it != index_.end()) counts[it->second] += 1.0;
  }
  FeatureVector features;
  features.reserve(counts.size());
  double norm = 0.0;
  for (const auto& [index, count] : counts) {
    const double v = std::log1p(count);
    features.emplace_back(index, v);
    norm += v * v;
  }
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (auto& f : features) f.second /= norm;
  }
  return features;
}

std::vector<double> ClassifierModel::posteriors(const FeatureVector& features) const {
  const std::size_t k = class_count();
  std::vector<double> scores = bias_;
  for (const auto& [index, value] : features) {
    const double* row = weights_.data() + index * k;
    for (std::size_t c = 0; c < k; ++c) scores[c] += row[c] * value;
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    sum += s;
  }
  for (double& s : scores) s /= sum;
  return scores;
}

}  // namespace lichen
