#include "seer/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>

#include "seer/error.hpp"
#include "seer/trace.hpp"

namespace seer {

namespace {

std::vector<HiddenTrace> run_all(const ModelBundle& model, std::span<const std::string> texts) {
  std::vector<HiddenTrace> out(texts.size());
  std::vector<std::exception_ptr> errors(texts.size());
  const long count = static_cast<long>(texts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = forward_text(model, texts[idx]);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "instance " + std::to_string(i) + ": " + e.detail());
    }
  }
  return out;
}

std::vector<StateTrace> encode_all(const AbstractionModel& abstraction,
                                   std::span<const HiddenTrace> traces) {
  std::vector<StateTrace> out(traces.size());
  const long count = static_cast<long>(traces.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = encode_trace(abstraction, traces[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

ConsistencyReport consistency_from_traces(const AbstractionModel& abstraction,
                                          const StateMachine& fsm,
                                          std::span<const HiddenTrace> traces,
                                          const std::string& split) {
  if (traces.empty()) throw Error(ErrorCode::EmptyDataset, "consistency needs at least one input");
  const std::vector<StateTrace> states = encode_all(abstraction, traces);
  ConsistencyReport report;
  report.split = split;
  report.n_states = abstraction.n_states();
  report.total = static_cast<long>(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (abstract_predict(fsm, states[i]) == traces[i].final_label) ++report.agree;
  }
  report.ratio = static_cast<double>(report.agree) / static_cast<double>(report.total);
  return report;
}

ConsistencyReport prediction_consistency(const ModelBundle& model,
                                         const AbstractionModel& abstraction,
                                         const StateMachine& fsm,
                                         std::span<const std::string> texts,
                                         const std::string& split) {
  if (texts.empty()) throw Error(ErrorCode::EmptyDataset, "consistency needs at least one input");
  const std::vector<HiddenTrace> traces = run_all(model, texts);
  return consistency_from_traces(abstraction, fsm, traces, split);
}

StateMachine build_fsm_for(const ModelBundle& model, const AbstractionModel& abstraction,
                           std::span<const HiddenTrace> train_traces) {
  const std::vector<StateTrace> states = encode_all(abstraction, train_traces);
  std::vector<TraceRecord> records(train_traces.size());
  for (std::size_t i = 0; i < train_traces.size(); ++i) {
    records[i].instance = i;
    records[i].states = states[i];
    records[i].labels = train_traces[i].intermediate_labels();
  }
  return build_fsm(abstraction.n_states(), model.num_classes(), records, PhraseOptions{0, 0});
}

std::vector<ConsistencyReport> sweep_states(const ModelBundle& model,
                                            std::span<const std::string> train_texts,
                                            std::span<const std::string> eval_texts,
                                            std::span<const int> n_list, int k, std::uint64_t seed,
                                            const SweepOptions& options) {
  if (n_list.empty()) throw Error(ErrorCode::BadComponentCount, "state grid is empty");
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw Error(ErrorCode::BadComponentCount, "state grid must be ascending");
  }
  if (train_texts.empty() || eval_texts.empty()) {
    throw Error(ErrorCode::EmptyDataset, "sweep needs training and evaluation texts");
  }
  if (k == 0) k = default_pca_dim(model.hidden_dim());

  const std::vector<HiddenTrace> train = run_all(model, train_texts);
  const std::vector<HiddenTrace> eval = run_all(model, eval_texts);
  std::vector<std::vector<int>> train_ids;
  train_ids.reserve(train.size());
  for (const HiddenTrace& t : train) train_ids.push_back(t.token_ids);
  const HarvestedStates harvested = harvest_hidden_states(model, train_ids);
  const PcaModel pca = fit_pca(harvested.rows, k);
  const Matrix projected = pca_transform(pca, harvested.rows);

  std::vector<ConsistencyReport> reports;
  for (int n : n_list) {
    const AbstractionModel abstraction(pca, fit_gmm(projected, n, seed, options.gmm));
    const StateMachine fsm = build_fsm_for(model, abstraction, train);
    reports.push_back(consistency_from_traces(abstraction, fsm, eval, "test"));
    if (options.include_train) reports.push_back(consistency_from_traces(abstraction, fsm, train, "train"));
  }
  return reports;
}

std::string reports_to_csv(std::span<const ConsistencyReport> reports) {
  std::string out = "n,split,agree,total,ratio\n";
  char ratio[32];
  for (const ConsistencyReport& r : reports) {
    std::snprintf(ratio, sizeof ratio, "%.6f", r.ratio);
    out += std::to_string(r.n_states) + "," + r.split + "," + std::to_string(r.agree) + "," +
           std::to_string(r.total) + "," + ratio + "\n";
  }
  return out;
}

json reports_to_json(std::span<const ConsistencyReport> reports) {
  json arr = json::array();
  for (const ConsistencyReport& r : reports) {
    arr.push_back({{"n", r.n_states}, {"split", r.split}, {"agree", r.agree}, {"total", r.total}, {"ratio", r.ratio}});
  }
  return json{{"reports", std::move(arr)}};
}

}  // namespace seer
