#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seer/abstraction.hpp"
#include "seer/dataset.hpp"
#include "seer/json_util.hpp"
#include "seer/model.hpp"
#include "seer/trace.hpp"

namespace seer {

struct InstanceRecord {
  std::size_t index = 0;
  Split split = Split::Train;
  std::string text;
  TraceRecord trace;  // tokens, abstract states, intermediate labels
  int prediction = 0;
  int human_label = 0;
  bool correct = false;

  friend bool operator==(const InstanceRecord&, const InstanceRecord&) = default;
};

/// Immutable table of analyzed instances with lookup indices.
class InstanceTable {
 public:
  InstanceTable() = default;
  InstanceTable(std::vector<InstanceRecord> records, int n_classes, int n_states);

  const std::vector<InstanceRecord>& records() const { return records_; }
  const InstanceRecord& at(std::size_t index) const { return records_.at(index); }
  std::size_t size() const { return records_.size(); }
  int n_classes() const { return n_classes_; }
  int n_states() const { return n_states_; }

  const std::vector<std::size_t>& split_members(Split split) const;
  /// Instances (ascending) whose trace visits `state`; empty for unknown ids.
  const std::vector<std::size_t>& visiting(int state) const;

  std::vector<TraceRecord> traces(Split split) const;
  std::vector<TraceRecord> traces(Split split, bool correct) const;

  friend bool operator==(const InstanceTable& a, const InstanceTable& b) {
    return a.n_classes_ == b.n_classes_ && a.n_states_ == b.n_states_ && a.records_ == b.records_;
  }

 private:
  std::vector<InstanceRecord> records_;
  int n_classes_ = 0;
  int n_states_ = 0;
  std::vector<std::size_t> train_;
  std::vector<std::size_t> test_;
  std::vector<std::vector<std::size_t>> by_state_;
};

/// Tokenizes, traces, encodes and classifies every row. Labels outside
/// [0, K) throw BadLabel; tokenizer failures name the row.
InstanceTable ingest(const std::vector<LabeledText>& rows, const ModelBundle& model,
                     const AbstractionModel& abstraction);

/// The analysis of one text, shared by ingest and the predict endpoint.
InstanceRecord analyze_text(const ModelBundle& model, const AbstractionModel& abstraction,
                            std::string_view text, std::vector<Vector>* probs = nullptr);

struct TextQuery {
  std::string text;
  bool regex = false;
};

enum class SortKey { Index, Text, Prediction, Label, Correct, Length };

std::string_view to_string(SortKey key);
SortKey parse_sort_key(std::string_view s);

struct QuerySpec {
  std::optional<Split> split;
  std::optional<bool> correct;
  std::optional<int> prediction;
  std::optional<int> human_label;
  std::optional<int> state;
  std::optional<std::vector<int>> pattern;
  int pattern_max_gap = 0;
  std::optional<TextQuery> text;
  SortKey sort = SortKey::Index;
  bool descending = false;
  int page = 1;
  int page_size = 50;
};

struct QueryResult {
  std::vector<std::size_t> page;  // record indices
  std::size_t total_count = 0;
  std::vector<long> label_distribution;       // over the whole filtered set
  std::vector<long> prediction_distribution;

  friend bool operator==(const QueryResult&, const QueryResult&) = default;
};

/// Conjunctive filters, distributions over the full filtered set, ordering by
/// the sort key then index. Throws BadQuery on an invalid spec or regex.
QueryResult query(const InstanceTable& table, const QuerySpec& spec);

struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

struct SearchHit {
  std::size_t instance = 0;
  std::vector<TextSpan> spans;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Non-overlapping byte spans, left to right. Keywords match case-insensitively
/// as substrings; regexes use Perl syntax and skip empty matches.
std::vector<TextSpan> find_spans(std::string_view text, const TextQuery& query);
std::vector<SearchHit> search_spans(const InstanceTable& table, const TextQuery& query);

json instance_to_json(const InstanceRecord& record);
InstanceRecord instance_from_json(const json& j);
json query_result_to_json(const InstanceTable& table, const QueryResult& result);

}  // namespace seer
