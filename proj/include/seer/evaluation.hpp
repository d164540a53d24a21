#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seer/abstraction.hpp"
#include "seer/fsm.hpp"
#include "seer/gmm.hpp"
#include "seer/json_util.hpp"
#include "seer/model.hpp"

namespace seer {

struct ConsistencyReport {
  std::string split;
  int n_states = 0;
  long agree = 0;
  long total = 0;
  double ratio = 0.0;

  friend bool operator==(const ConsistencyReport&, const ConsistencyReport&) = default;
};

/// Fraction of inputs where the FSM's prediction (abstract_predict over the
/// encoded trace) equals the RNN's final label. Throws EmptyDataset on no input.
ConsistencyReport prediction_consistency(const ModelBundle& model,
                                         const AbstractionModel& abstraction,
                                         const StateMachine& fsm,
                                         std::span<const std::string> texts,
                                         const std::string& split = "test");

/// Same, over traces that were already run through the model.
ConsistencyReport consistency_from_traces(const AbstractionModel& abstraction,
                                          const StateMachine& fsm,
                                          std::span<const HiddenTrace> traces,
                                          const std::string& split);

/// FSM built from the training texts alone (no phrase index), as used for
/// consistency measurement.
StateMachine build_fsm_for(const ModelBundle& model, const AbstractionModel& abstraction,
                           std::span<const HiddenTrace> train_traces);

struct SweepOptions {
  bool include_train = false;  // also report consistency on the training texts
  GmmOptions gmm;
};

/// Fits PCA once on the training hidden states, then one mixture per n in
/// `n_list` (ascending), reporting consistency on `eval_texts` for each n,
/// followed by the train report when include_train is set.
std::vector<ConsistencyReport> sweep_states(const ModelBundle& model,
                                            std::span<const std::string> train_texts,
                                            std::span<const std::string> eval_texts,
                                            std::span<const int> n_list, int k, std::uint64_t seed,
                                            const SweepOptions& options = {});

/// "n,split,agree,total,ratio" with one row per report.
std::string reports_to_csv(std::span<const ConsistencyReport> reports);
json reports_to_json(std::span<const ConsistencyReport> reports);

}  // namespace seer
