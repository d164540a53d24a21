#include "seer/synthetic.hpp"

#include <array>
#include <sstream>

#include "seer/random.hpp"

namespace seer {

namespace {

constexpr std::array<const char*, 6> kPositive = {"good", "great", "fine", "nice", "love", "superb"};
constexpr std::array<const char*, 6> kNegative = {"bad", "awful", "poor", "hate", "boring", "terrible"};
constexpr std::array<const char*, 14> kFiller = {"the",  "movie", "was", "it",   "plot", "and", "but",
                                                 "this", "really", "so", "acting", "i",   "film", "very"};

template <std::size_t N>
bool contains(const std::array<const char*, N>& words, const std::string& w) {
  for (const char* x : words) {
    if (w == x) return true;
  }
  return false;
}

}  // namespace

int sentiment_rule(const std::string& text) {
  std::istringstream in(text);
  std::string word, previous;
  int label = 1;
  while (in >> word) {
    const bool pos = contains(kPositive, word);
    const bool neg = contains(kNegative, word);
    if (pos || neg) {
      label = pos ? 1 : 0;
      if (previous == "not") label = 1 - label;
    }
    previous = word;
  }
  return label;
}

std::vector<LabeledText> make_sentiment_corpus(const SyntheticOptions& o) {
  Rng rng(o.seed);
  std::vector<LabeledText> rows;
  const auto sentence = [&]() {
    const int span = o.max_len - o.min_len + 1;
    const int length = o.min_len + static_cast<int>(rng.below(static_cast<std::uint64_t>(span)));
    std::vector<std::string> words;
    bool has_sentiment = false;
    while (static_cast<int>(words.size()) < length) {
      if (rng.uniform() < o.sentiment_rate) {
        if (rng.uniform() < o.negation_rate && static_cast<int>(words.size()) + 1 < length) words.push_back("not");
        const bool pos = rng.uniform() < 0.5;
        words.push_back(pos ? kPositive[rng.below(kPositive.size())] : kNegative[rng.below(kNegative.size())]);
        has_sentiment = true;
      } else {
        words.push_back(kFiller[rng.below(kFiller.size())]);
      }
    }
    if (!has_sentiment) {
      const bool pos = rng.uniform() < 0.5;
      words[rng.below(words.size())] =
          pos ? kPositive[rng.below(kPositive.size())] : kNegative[rng.below(kNegative.size())];
    }
    std::string text;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) text.push_back(' ');
      text += words[i];
    }
    return text;
  };
  for (std::size_t i = 0; i < o.train + o.test; ++i) {
    LabeledText row;
    row.text = sentence();
    row.label = sentiment_rule(row.text);
    row.split = i < o.train ? Split::Train : Split::Test;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace seer
