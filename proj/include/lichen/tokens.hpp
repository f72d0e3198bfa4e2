#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lichen {

// A deduplicated set of normalized words, stored sorted.
class TokenSet {
 public:
  TokenSet() = default;
  explicit TokenSet(std::vector<std::string> tokens);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  bool contains(std::string_view token) const;

  friend bool operator==(const TokenSet&, const TokenSet&) = default;

 private:
  std::vector<std::string> tokens_;
};

// Lowercased maximal runs of ASCII letters and digits, in text order. Every
// other byte (punctuation, whitespace, non-ASCII) separates words.
std::vector<std::string> token_sequence(std::string_view text);

TokenSet normalize_tokens(std::string_view text);

std::size_t intersection_size(const TokenSet& x, const TokenSet& y);

// Sørensen–Dice coefficient 2|x∩y| / (|x|+|y|); 1.0 for two empty sets.
double dice(const TokenSet& x, const TokenSet& y);

}  // namespace lichen
