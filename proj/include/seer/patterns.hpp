#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "seer/fsm.hpp"
#include "seer/json_util.hpp"
#include "seer/trace.hpp"

namespace seer {

inline constexpr const char* kPatternsVersion = "seer-patterns/1";

enum class PatternKind { Influential, Buggy };

std::string_view to_string(PatternKind kind);

struct PatternEntry {
  PatternKind kind = PatternKind::Influential;
  std::vector<int> states;
  long support = 0;
  std::vector<PhraseCount> phrases;
  std::vector<std::size_t> sample_instance_ids;

  friend bool operator==(const PatternEntry&, const PatternEntry&) = default;
};

struct SequencePattern {
  std::vector<int> states;
  long support = 0;

  friend bool operator==(const SequencePattern&, const SequencePattern&) = default;
};

struct MiningConfig {
  int window = 3;
  int influential_top_k = 20;
  int buggy_top_k = 10;
  int min_len = 2;
  int max_len = 5;
  int max_gap = 0;
  int max_phrases = 10;
  int max_samples = 10;

  friend bool operator==(const MiningConfig&, const MiningConfig&) = default;
};

struct PatternSet {
  std::vector<PatternEntry> influential;
  std::vector<PatternEntry> buggy;
  MiningConfig config;

  friend bool operator==(const PatternSet&, const PatternSet&) = default;
};

/// Positions t ≥ 1 (0-based) where the intermediate argmax differs from t−1.
std::vector<std::size_t> find_pivots(std::span<const int> labels);
std::vector<std::size_t> find_pivots(std::span<const Eigen::VectorXd> probs);

/// Trailing windows of up to `window` states ending at each pivot, counted per
/// occurrence across the corpus. Ranked by support, then shorter, then
/// lexicographic states.
std::vector<PatternEntry> mine_influential(std::span<const TraceRecord> traces, int window = 3,
                                           int top_k = 20, int max_phrases = 10,
                                           int max_samples = 10);

/// Top-k state subsequences with length in [min_len, max_len], support counted
/// per distinct trace, consecutive matched positions at most max_gap apart.
/// Pattern growth over projected end positions, raising the support threshold
/// as the top-k list fills. Throws BadK for k < 1 or inconsistent lengths.
std::vector<SequencePattern> mine_topk_subsequences(std::span<const std::vector<int>> db, int k,
                                                    int min_len = 2, int max_len = 5,
                                                    int max_gap = 0);

/// Frequent subsequences of the misclassified traces that never occur in the
/// correctly classified ones.
std::vector<PatternEntry> mine_buggy(std::span<const TraceRecord> correct,
                                     std::span<const TraceRecord> wrong, int k = 10,
                                     const MiningConfig& config = {});

/// Earliest embedding of `pattern` in `states`: leftmost start, then the
/// lexicographically smallest positions. Returns the token span [begin, end).
std::optional<std::pair<std::size_t, std::size_t>> first_match(std::span<const int> states,
                                                               std::span<const int> pattern,
                                                               int max_gap = 0);

struct PatternMatch {
  std::size_t instance = 0;
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const PatternMatch&, const PatternMatch&) = default;
};

std::vector<PatternMatch> pattern_instances(std::span<const TraceRecord> traces,
                                            std::span<const int> pattern, int max_gap = 0);

json pattern_entry_to_json(const PatternEntry& p);
json patterns_to_json(const PatternSet& set);
PatternSet patterns_from_json(const json& j);

}  // namespace seer
