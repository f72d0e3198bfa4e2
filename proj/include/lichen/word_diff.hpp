#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lichen/corpus.hpp"

namespace lichen {

enum class DiffOp { kEqual, kDelete, kInsert };

// A maximal run of words sharing one operation. Deletions are words of the
// canonical text missing from the inspected text; insertions are words the
// inspected text adds.
struct DiffRun {
  DiffOp op;
  std::vector<std::string> words;

  friend bool operator==(const DiffRun&, const DiffRun&) = default;
};

using WordDiff = std::vector<DiffRun>;

// Shortest edit script between two word sequences (longest common
// subsequence, linear space). Within a change block the delete run precedes
// the insert run.
WordDiff diff_words(const std::vector<std::string>& from, const std::vector<std::string>& to);

bool has_changes(const WordDiff& diff);

// Diff from the canonical text of `id` to `text`, on normalized word
// sequences. Throws NotFoundError for Unknown/None.
WordDiff diff_against_canonical(std::string_view text, LicenseId id, const LicenseCorpus& corpus);

// "[-removed-]{+added+}" rendering with `context` equal words kept around
// each change.
std::string render_diff(const WordDiff& diff, std::size_t context = 8);

}  // namespace lichen
