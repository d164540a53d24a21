#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seer/abstraction.hpp"
#include "seer/corpus.hpp"
#include "seer/dataset.hpp"
#include "seer/model.hpp"
#include "seer/patterns.hpp"
#include "seer/random.hpp"

namespace seer::testkit {

/// Vocabulary "<unk>" plus the given pieces.
Vocabulary make_vocabulary(const std::vector<std::string>& pieces);
/// Letters a..(V-2) plus "<unk>" at id 0.
Vocabulary letter_vocabulary(int size);
/// Pieces that segment "hypocrisy" as hypo|cri|sy.
Vocabulary hypocrisy_vocabulary();

/// Every parameter uniform in [−scale, scale].
ModelBundle random_model(const Vocabulary& vocab, int embed_dim, int hidden_dim, int classes,
                         std::uint64_t seed, double scale = 0.5);
ModelBundle random_model(int vocab_size, int embed_dim, int hidden_dim, int classes, std::uint64_t seed,
                         double scale = 0.5);

/// One token per whitespace word, or per '|'-separated piece inside a word.
/// Ids are positional and not meaningful.
TraceRecord make_trace(std::size_t instance, const std::string& text, std::vector<int> states,
                       std::vector<int> labels);
InstanceRecord make_record(std::size_t index, Split split, const std::string& text, std::vector<int> states,
                           int prediction, int human_label);

/// Ten instances, three of them misclassified.
InstanceTable ten_instance_table();
/// 28 training sentences mention "quarters": 27 predicted positive, 1 negative.
InstanceTable quarters_table();
/// Random records over a small word list, for query fuzzing.
InstanceTable random_table(std::size_t n, std::uint64_t seed, int n_classes = 3, int n_states = 8);
QuerySpec random_spec(Rng& rng, const InstanceTable& table);

/// "hypocrisy" (hypo|cri|sy on states 13→9→9) flips the running prediction,
/// and so do 12 sentences ending in "suck it up" on the same states.
std::vector<TraceRecord> hypocrisy_traces();

struct BuggyFixture {
  std::vector<TraceRecord> correct;
  std::vector<TraceRecord> wrong;
};
/// Punctuation runs ("...", "!!!", "???") live on states that only the
/// misclassified traces visit.
BuggyFixture punctuation_fixture();
/// Random traces split into correct and wrong sets.
BuggyFixture random_buggy_fixture(std::uint64_t seed);

/// An untrained model over a small synthetic corpus with its abstraction.
/// Predictions are close to chance, so both splits contain errors.
struct SmallPipeline {
  std::vector<LabeledText> rows;
  ModelBundle model;
  AbstractionModel abstraction;
};
SmallPipeline small_pipeline(std::uint64_t seed = 1, std::size_t train = 150, std::size_t test = 50);

/// Sentences whose label is decided by one keyword.
std::vector<LabeledText> keyword_dataset();

}  // namespace seer::testkit
