// Trains the bag-of-words license classifier from the bundled canonical
// texts and writes the model plus a held-out accuracy report.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "lichen/corpus.hpp"
#include "lichen/training.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Train the license classifier"};
  std::string output;
  std::string report_path;
  std::string data_dir;
  lichen::training::Options options;
  app.add_option("--output", output, "Model file to write")->required();
  app.add_option("--report", report_path, "Accuracy report to write");
  app.add_option("--data-dir", data_dir, "Directory overriding the bundled license data");
  app.add_option("--iterations", options.iterations, "Optimizer iterations");
  app.add_option("--threshold", options.posterior_threshold, "Posterior threshold stored in the model")
      ->check(CLI::Range(0.0, 1.0));
  CLI11_PARSE(app, argc, argv);

  try {
    namespace tr = lichen::training;
    const auto started = std::chrono::steady_clock::now();
    const auto corpus = lichen::LicenseCorpus::load(
        data_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(data_dir));
    const auto train_set = tr::build_dataset(corpus, tr::kTrainSeed, tr::kTrainPerClass);
    const auto model = tr::train(corpus, train_set, options);
    const auto held_out = tr::build_dataset(corpus, tr::kHeldOutSeed, tr::kHeldOutPerClass);
    const auto train_eval = tr::evaluate(model, train_set);
    const auto eval = tr::evaluate(model, held_out);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::ofstream out(output, std::ios::binary);
    out << model.serialize();
    if (!out) {
      std::cerr << "cannot write " << output << "\n";
      return 2;
    }

    std::ostringstream report;
    report << std::fixed << std::setprecision(4);
    report << "classes " << model.class_count() << "\n";
    report << "vocabulary " << model.feature_count() << "\n";
    report << "train_examples " << train_eval.total << "\n";
    report << "train_accuracy " << train_eval.accuracy() << "\n";
    report << "heldout_examples " << eval.total << "\n";
    report << "heldout_correct " << eval.correct << "\n";
    report << "heldout_accuracy " << eval.accuracy() << "\n";
    report << "heldout_abstain_correct " << eval.abstain_correct << "/" << eval.abstain_total << "\n";
    report << "seconds " << std::setprecision(1) << seconds << "\n";
    std::cout << report.str();
    if (!report_path.empty()) std::ofstream(report_path) << report.str();
  } catch (const std::exception& e) {
    std::cerr << "train_classifier: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
