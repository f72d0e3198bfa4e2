#include "lichen/word_diff.hpp"

#include <algorithm>

#include "lichen/tokens.hpp"

namespace lichen {
namespace {

using Words = std::vector<std::string>;
using Iter = Words::const_iterator;

void append(WordDiff& diff, DiffOp op, Iter first, Iter last) {
  if (first == last) return;
  if (!diff.empty() && diff.back().op == op) {
    diff.back().words.insert(diff.back().words.end(), first, last);
    return;
  }
  // Keep delete-before-insert inside a change block.
  if (op == DiffOp::kDelete && !diff.empty() && diff.back().op == DiffOp::kInsert) {
    auto insert_run = std::move(diff.back());
    diff.pop_back();
    append(diff, DiffOp::kDelete, first, last);
    diff.push_back(std::move(insert_run));
    return;
  }
  diff.push_back(DiffRun{op, Words(first, last)});
}

// LCS lengths of a against every prefix of b, one row at a time.
std::vector<std::size_t> lcs_row(Iter a_first, Iter a_last, Iter b_first, Iter b_last) {
  const auto m = static_cast<std::size_t>(b_last - b_first);
  std::vector<std::size_t> row(m + 1, 0), prev(m + 1, 0);
  for (Iter a = a_first; a != a_last; ++a) {
    std::swap(row, prev);
    row[0] = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      row[j] = (*a == *(b_first + static_cast<std::ptrdiff_t>(j - 1))) ? prev[j - 1] + 1
                                                                        : std::max(prev[j], row[j - 1]);
    }
  }
  return row;
}

// Same, scanning both ranges from the back.
std::vector<std::size_t> lcs_row_reverse(Iter a_first, Iter a_last, Iter b_first, Iter b_last) {
  const auto m = static_cast<std::size_t>(b_last - b_first);
  std::vector<std::size_t> row(m + 1, 0), prev(m + 1, 0);
  for (Iter a = a_last; a != a_first;) {
    --a;
    std::swap(row, prev);
    row[0] = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      row[j] = (*a == *(b_last - static_cast<std::ptrdiff_t>(j))) ? prev[j - 1] + 1
                                                                  : std::max(prev[j], row[j - 1]);
    }
  }
  return row;
}

// Hirschberg's divide and conquer.
void diff_range(WordDiff& diff, Iter a_first, Iter a_last, Iter b_first, Iter b_last) {
  // Common prefix and suffix are emitted directly.
  Iter a = a_first, b = b_first;
  while (a != a_last && b != b_last && *a == *b) {
    ++a;
    ++b;
  }
  append(diff, DiffOp::kEqual, a_first, a);
  Iter a_end = a_last, b_end = b_last;
  while (a_end != a && b_end != b && *(a_end - 1) == *(b_end - 1)) {
    --a_end;
    --b_end;
  }

  if (a == a_end || b == b_end) {
    append(diff, DiffOp::kDelete, a, a_end);
    append(diff, DiffOp::kInsert, b, b_end);
  } else if (a_end - a == 1) {
    Iter hit = std::find(b, b_end, *a);
    if (hit == b_end) {
      append(diff, DiffOp::kDelete, a, a_end);
      append(diff, DiffOp::kInsert, b, b_end);
    } else {
      append(diff, DiffOp::kInsert, b, hit);
      append(diff, DiffOp::kEqual, a, a_end);
      append(diff, DiffOp::kInsert, hit + 1, b_end);
    }
  } else {
    const Iter a_mid = a + (a_end - a) / 2;
    const auto left = lcs_row(a, a_mid, b, b_end);
    const auto right = lcs_row_reverse(a_mid, a_end, b, b_end);
    const auto m = static_cast<std::size_t>(b_end - b);
    std::size_t split = 0, best = 0;
    for (std::size_t j = 0; j <= m; ++j) {
      const std::size_t total = left[j] + right[m - j];
      if (total > best || j == 0) {
        best = total;
        split = j;
      }
    }
    const Iter b_mid = b + static_cast<std::ptrdiff_t>(split);
    diff_range(diff, a, a_mid, b, b_mid);
    diff_range(diff, a_mid, a_end, b_mid, b_end);
  }

  append(diff, DiffOp::kEqual, a_end, a_last);
}

}  // namespace

WordDiff diff_words(const std::vector<std::string>& from, const std::vector<std::string>& to) {
  WordDiff diff;
  diff_range(diff, from.begin(), from.end(), to.begin(), to.end());
  return diff;
}

bool has_changes(const WordDiff& diff) {
  return std::any_of(diff.begin(), diff.end(), [](const DiffRun& r) { return r.op != DiffOp::kEqual; });
}

WordDiff diff_against_canonical(std::string_view text, LicenseId id, const LicenseCorpus& corpus) {
  const auto& record = corpus.lookup(id);
  return diff_words(token_sequence(record.canonical_text), token_sequence(text));
}

std::string render_diff(const WordDiff& diff, std::size_t context) {
  if (!has_changes(diff)) return {};
  auto join = [](auto first, auto last) {
    std::string s;
    for (auto it = first; it != last; ++it) {
      if (!s.empty()) s += ' ';
      s += *it;
    }
    return s;
  };
  std::string out;
  auto emit = [&](const std::string& piece) {
    if (piece.empty()) return;
    if (!out.empty() && out.back() != '\n') out += ' ';
    out += piece;
  };
  for (std::size_t i = 0; i < diff.size(); ++i) {
    const auto& run = diff[i];
    switch (run.op) {
      case DiffOp::kDelete: emit("[-" + join(run.words.begin(), run.words.end()) + "-]"); break;
      case DiffOp::kInsert: emit("{+" + join(run.words.begin(), run.words.end()) + "+}"); break;
      case DiffOp::kEqual: {
        const auto& w = run.words;
        const auto ctx = static_cast<std::ptrdiff_t>(std::min(context, w.size()));
        const bool has_prev = i > 0;
        const bool has_next = i + 1 < diff.size();
        if (has_prev && has_next && w.size() <= 2 * context) {
          emit(join(w.begin(), w.end()));
        } else {
          if (has_prev) emit(join(w.begin(), w.begin() + ctx));
          const bool between = has_prev && has_next;
          if (w.size() > (between ? 2 * context : context)) emit(between ? "...\n..." : "...");
          if (has_next) emit(join(w.end() - ctx, w.end()));
        }
        break;
      }
    }
  }
  if (!out.empty() && out.back() != '\n') out += '\n';
  return out;
}

}  // namespace lichen
