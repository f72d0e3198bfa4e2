#include "lichen/classifier.hpp"
#include "lichen/detector.hpp"
#include "lichen/error.hpp"
#include "lichen/resources.hpp"

namespace lichen {

const ClassifierModel& ClassifierModel::builtin() {
  static const ClassifierModel model = [] {
    auto text = find_embedded(embedded_model_files(), "classifier.model");
    if (!text) throw ModelError("no classifier model embedded");
    return parse(*text);
  }();
  return model;
}

const Detector& Detector::builtin() {
  static const Detector detector(LicenseCorpus::builtin(), ClassifierModel::builtin());
  return detector;
}

}  // namespace lichen
