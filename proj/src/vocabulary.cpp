#include "seer/vocabulary.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "seer/error.hpp"

namespace seer {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Byte length of the UTF-8 sequence starting with `lead`; malformed lead
// bytes are treated as single-byte characters.
std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

std::vector<std::string_view> split_words(std::string_view normalized) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < normalized.size()) {
    std::size_t j = normalized.find(' ', i);
    if (j == std::string_view::npos) j = normalized.size();
    if (j > i) words.push_back(normalized.substr(i, j - i));
    i = j + 1;
  }
  return words;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> entries, int unknown_id)
    : entries_(std::move(entries)), unknown_id_(unknown_id) {
  if (entries_.empty()) throw Error(ErrorCode::BadModelFile, "vocabulary is empty");
  if (unknown_id_ < 0 || unknown_id_ >= size()) {
    throw Error(ErrorCode::BadModelFile, "unknown_id out of range");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::BadModelFile, "duplicate vocabulary entry '" + entries_[i] + "'");
    }
    if (static_cast<int>(i) != unknown_id_) {
      max_piece_bytes_ = std::max(max_piece_bytes_, entries_[i].size());
    }
  }
}

std::optional<int> Vocabulary::find(std::string_view piece) const {
  auto it = index_.find(std::string(piece));
  if (it == index_.end() || it->second == unknown_id_) return std::nullopt;
  return it->second;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

std::vector<Token> tokenize_pieces(std::string_view text, const Vocabulary& vocab) {
  const std::string normalized = normalize_text(text);
  if (normalized.empty()) throw Error(ErrorCode::EmptyInput, "text is empty after normalization");

  std::vector<Token> tokens;
  for (std::string_view word : split_words(normalized)) {
    std::size_t pos = 0;
    bool first = true;
    while (pos < word.size()) {
      const std::size_t longest = std::min(vocab.max_piece_bytes(), word.size() - pos);
      std::optional<int> match;
      std::size_t match_len = 0;
      for (std::size_t len = longest; len > 0; --len) {
        if (auto id = vocab.find(word.substr(pos, len))) {
          match = id;
          match_len = len;
          break;
        }
      }
      if (!match) {
        match = vocab.unknown_id();
        match_len = std::min(utf8_length(static_cast<unsigned char>(word[pos])), word.size() - pos);
      }
      tokens.push_back(Token{*match, std::string(word.substr(pos, match_len)), first});
      first = false;
      pos += match_len;
    }
  }
  return tokens;
}

std::vector<int> tokenize(std::string_view text, const Vocabulary& vocab) {
  std::vector<int> ids;
  for (const Token& t : tokenize_pieces(text, vocab)) ids.push_back(t.id);
  return ids;
}

std::string join_pieces(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && tokens[i].word_start) out.push_back(' ');
    out += tokens[i].piece;
  }
  return out;
}

Vocabulary build_vocabulary(std::span<const std::string> texts, std::size_t max_words) {
  std::map<std::string, long> word_counts;
  std::set<std::string> characters;
  for (const std::string& text : texts) {
    const std::string normalized = normalize_text(text);
    for (std::string_view word : split_words(normalized)) {
      ++word_counts[std::string(word)];
      for (std::size_t i = 0; i < word.size();) {
        const std::size_t len = std::min(utf8_length(static_cast<unsigned char>(word[i])), word.size() - i);
        characters.emplace(word.substr(i, len));
        i += len;
      }
    }
  }
  std::vector<std::pair<std::string, long>> ranked(word_counts.begin(), word_counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::string> entries{"<unk>"};
  std::set<std::string> seen{"<unk>"};
  for (const auto& [word, count] : ranked) {
    if (entries.size() - 1 >= max_words) break;
    if (seen.insert(word).second) entries.push_back(word);
  }
  for (const std::string& c : characters) {
    if (seen.insert(c).second) entries.push_back(c);
  }
  return Vocabulary(std::move(entries), 0);
}

}  // namespace seer
