#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seer/dataset.hpp"

namespace seer {

/// Regular-language sentiment task: the label is the polarity of the last
/// sentiment word, inverted when "not" immediately precedes it. Running
/// predictions therefore flip at sentiment words.
struct SyntheticOptions {
  std::size_t train = 2000;
  std::size_t test = 500;
  int min_len = 4;
  int max_len = 10;
  double sentiment_rate = 0.3;
  double negation_rate = 0.25;
  std::uint64_t seed = 11;
};

std::vector<LabeledText> make_sentiment_corpus(const SyntheticOptions& options = {});

/// The labeling rule applied to any whitespace-tokenized sentence.
int sentiment_rule(const std::string& text);

inline std::vector<std::string> sentiment_class_names() { return {"negative", "positive"}; }

}  // namespace seer
