#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace lichen {

struct EmbeddedFile {
  std::string_view name;
  std::string_view data;
};

// Files compiled into the binary: license texts, the compatibility table and
// the license-name patterns (paths relative to data/).
std::span<const EmbeddedFile> embedded_data_files();

// The classifier model produced by train_classifier during the build.
std::span<const EmbeddedFile> embedded_model_files();

std::optional<std::string_view> find_embedded(std::span<const EmbeddedFile> files,
                                              std::string_view name);

}  // namespace lichen
