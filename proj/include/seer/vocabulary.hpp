#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace seer {

/// Dense subword vocabulary. Ids are 0..size()-1, entries are unique, and one
/// id is reserved for pieces that match nothing.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> entries, int unknown_id);

  int size() const { return static_cast<int>(entries_.size()); }
  int unknown_id() const { return unknown_id_; }
  const std::vector<std::string>& entries() const { return entries_; }
  const std::string& piece(int id) const { return entries_.at(static_cast<std::size_t>(id)); }
  std::optional<int> find(std::string_view piece) const;
  std::size_t max_piece_bytes() const { return max_piece_bytes_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.unknown_id_ == b.unknown_id_ && a.entries_ == b.entries_;
  }

 private:
  std::vector<std::string> entries_;
  int unknown_id_ = 0;
  std::unordered_map<std::string, int> index_;
  std::size_t max_piece_bytes_ = 0;
};

/// One segmented piece. `piece` is the surface text taken from the normalized
/// input (for unknown ids it is the unmatched character itself).
struct Token {
  int id = 0;
  std::string piece;
  bool word_start = false;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Lowercases ASCII letters and collapses whitespace runs to single spaces.
std::string normalize_text(std::string_view text);

/// Greedy longest-match segmentation of each whitespace-separated word.
/// Throws EmptyInput when nothing is left after normalization.
std::vector<Token> tokenize_pieces(std::string_view text, const Vocabulary& vocab);
std::vector<int> tokenize(std::string_view text, const Vocabulary& vocab);

/// Joins pieces back into readable text: a space before every word-initial
/// piece except the first.
std::string join_pieces(std::span<const Token> tokens);

/// Vocabulary made of the "<unk>" entry, every distinct single character seen,
/// and the most frequent whole words (ties broken lexicographically).
Vocabulary build_vocabulary(std::span<const std::string> texts, std::size_t max_words);

}  // namespace seer
