#include "lichen/tokens.hpp"

#include <algorithm>

namespace lichen {
namespace {

bool is_word_byte(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char fold(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

TokenSet::TokenSet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  std::sort(tokens_.begin(), tokens_.end());
  tokens_.erase(std::unique(tokens_.begin(), tokens_.end()), tokens_.end());
}

bool TokenSet::contains(std::string_view token) const {
  return std::binary_search(tokens_.begin(), tokens_.end(), token);
}

std::vector<std::string> token_sequence(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (is_word_byte(c)) {
      current.push_back(fold(c));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

TokenSet normalize_tokens(std::string_view text) { return TokenSet(token_sequence(text)); }

std::size_t intersection_size(const TokenSet& x, const TokenSet& y) {
  std::size_t n = 0;
  auto a = x.tokens().begin();
  auto b = y.tokens().begin();
  while (a != x.tokens().end() && b != y.tokens().end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++n;
      ++a;
      ++b;
    }
  }
  return n;
}

double dice(const TokenSet& x, const TokenSet& y) {
  const std::size_t total = x.size() + y.size();
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(intersection_size(x, y)) / static_cast<double>(total);
}

}  // namespace lichen
