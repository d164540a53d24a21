#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seer/json_util.hpp"
#include "seer/trace.hpp"

namespace seer {

inline constexpr const char* kFsmVersion = "seer-fsm/1";

struct PhraseCount {
  std::string text;
  long support = 0;

  friend bool operator==(const PhraseCount&, const PhraseCount&) = default;
};

struct StateNode {
  long distinct_visits = 0;                  // sentences that visit the state at least once
  std::vector<long> occurrence_class_counts; // intermediate predictions made at this state
  std::vector<long> final_class_counts;      // model predictions of traces ending here
  std::vector<PhraseCount> phrases;          // support-descending

  friend bool operator==(const StateNode&, const StateNode&) = default;
};

struct StateMachine {
  int n_states = 0;
  int n_classes = 0;
  std::vector<StateNode> nodes;
  std::map<std::pair<int, int>, long> edges;  // includes self-loops

  friend bool operator==(const StateMachine&, const StateMachine&) = default;
};

struct PhraseOptions {
  int max_len = 3;  // 0 disables phrase association
  int top = 10;
};

/// Counts visits, per-class occurrences, final predictions and transitions.
/// Throws MalformedTrace if a trace's states and labels differ in length, a
/// trace is empty, or a state/label is out of range.
StateMachine build_fsm(int n_states, int n_classes, std::span<const TraceRecord> traces,
                       const PhraseOptions& phrases = {});

/// For each state, the surface n-grams (length 1..max_len) whose last token
/// sits at that state, ranked by support then text; top-N kept.
std::vector<std::vector<PhraseCount>> associate_phrases(int n_states,
                                                        std::span<const TraceRecord> traces,
                                                        int max_len = 3, int top = 10);

struct StateDetails {
  int id = 0;
  long distinct_visits = 0;
  std::vector<long> occurrence_class_counts;
  std::vector<long> final_class_counts;
  std::vector<PhraseCount> phrases;
};

/// Throws UnknownState for ids outside [0, n_states).
StateDetails state_details(const StateMachine& fsm, int state_id);

/// Majority of final_class_counts at the last state (lowest class on ties);
/// falls back to occurrence counts, then to class 0.
int abstract_predict(const StateMachine& fsm, std::span<const int> states);

json fsm_to_json(const StateMachine& fsm);
StateMachine fsm_from_json(const json& j);
json state_details_to_json(const StateDetails& d);

}  // namespace seer
