#include "lichen/resources.hpp"

#include <algorithm>

namespace lichen {

std::optional<std::string_view> find_embedded(std::span<const EmbeddedFile> files,
                                              std::string_view name) {
  auto it = std::find_if(files.begin(), files.end(),
                         [&](const EmbeddedFile& f) { return f.name == name; });
  if (it == files.end()) return std::nullopt;
  return it->data;
}

}  // namespace lichen
