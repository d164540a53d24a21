#include "seer/corpus.hpp"

#include <algorithm>
#include <exception>
#include <set>

#include <boost/regex.hpp>

#include "seer/error.hpp"
#include "seer/patterns.hpp"

namespace seer {

namespace {

char lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

boost::regex compile_regex(const std::string& pattern) {
  try {
    return boost::regex(pattern, boost::regex::perl);
  } catch (const boost::regex_error& e) {
    throw Error(ErrorCode::BadQuery, "invalid regular expression at position " +
                                         std::to_string(e.position()) + ": " + e.what());
  }
}

// Compiled form of a TextQuery, reused across all records of one query.
class TextMatcher {
 public:
  explicit TextMatcher(const TextQuery& q) : query_(q) {
    if (q.text.empty()) throw Error(ErrorCode::BadQuery, "search text is empty");
    if (q.regex) {
      regex_ = compile_regex(q.text);
    } else {
      for (char c : q.text) needle_.push_back(lower_ascii(c));
    }
  }

  std::vector<TextSpan> spans(std::string_view text) const {
    std::vector<TextSpan> out;
    if (query_.regex) {
      boost::cregex_iterator it(text.data(), text.data() + text.size(), regex_);
      for (; it != boost::cregex_iterator(); ++it) {
        const auto& m = (*it)[0];
        if (m.length() == 0) continue;
        const auto begin = static_cast<std::size_t>(m.first - text.data());
        out.push_back(TextSpan{begin, begin + static_cast<std::size_t>(m.length())});
      }
      return out;
    }
    std::string hay;
    hay.reserve(text.size());
    for (char c : text) hay.push_back(lower_ascii(c));
    std::size_t pos = 0;
    while ((pos = hay.find(needle_, pos)) != std::string::npos) {
      out.push_back(TextSpan{pos, pos + needle_.size()});
      pos += needle_.size();
    }
    return out;
  }

  bool matches(std::string_view text) const {
    if (query_.regex) return boost::regex_search(text.begin(), text.end(), regex_);
    return !spans(text).empty();
  }

 private:
  TextQuery query_;
  boost::regex regex_;
  std::string needle_;
};

const std::vector<std::size_t> kNone;

}  // namespace

InstanceTable::InstanceTable(std::vector<InstanceRecord> records, int n_classes, int n_states)
    : records_(std::move(records)), n_classes_(n_classes), n_states_(n_states) {
  by_state_.resize(static_cast<std::size_t>(std::max(n_states, 0)));
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const InstanceRecord& r = records_[i];
    if (r.index != i) throw Error(ErrorCode::IngestError, "records must be indexed 0..N-1 in order");
    (r.split == Split::Train ? train_ : test_).push_back(i);
    std::set<int> visited(r.trace.states.begin(), r.trace.states.end());
    for (int s : visited) {
      if (s >= 0 && s < n_states) by_state_[static_cast<std::size_t>(s)].push_back(i);
    }
  }
}

const std::vector<std::size_t>& InstanceTable::split_members(Split split) const {
  return split == Split::Train ? train_ : test_;
}

const std::vector<std::size_t>& InstanceTable::visiting(int state) const {
  if (state < 0 || state >= n_states_) return kNone;
  return by_state_[static_cast<std::size_t>(state)];
}

std::vector<TraceRecord> InstanceTable::traces(Split split) const {
  std::vector<TraceRecord> out;
  for (std::size_t i : split_members(split)) out.push_back(records_[i].trace);
  return out;
}

std::vector<TraceRecord> InstanceTable::traces(Split split, bool correct) const {
  std::vector<TraceRecord> out;
  for (std::size_t i : split_members(split)) {
    if (records_[i].correct == correct) out.push_back(records_[i].trace);
  }
  return out;
}

InstanceRecord analyze_text(const ModelBundle& model, const AbstractionModel& abstraction,
                            std::string_view text, std::vector<Vector>* probs) {
  InstanceRecord rec;
  rec.text = std::string(text);
  rec.trace.tokens = tokenize_pieces(text, model.vocab);
  std::vector<int> ids;
  ids.reserve(rec.trace.tokens.size());
  for (const Token& t : rec.trace.tokens) ids.push_back(t.id);
  HiddenTrace hidden = forward_trace(model, ids);
  rec.trace.states = encode_trace(abstraction, hidden);
  rec.trace.labels = hidden.intermediate_labels();
  rec.prediction = hidden.final_label;
  if (probs) *probs = std::move(hidden.probs);
  return rec;
}

InstanceTable ingest(const std::vector<LabeledText>& rows, const ModelBundle& model,
                     const AbstractionModel& abstraction) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].label < 0 || rows[i].label >= model.num_classes()) {
      throw Error(ErrorCode::BadLabel, "row " + std::to_string(i) + ": label " +
                                           std::to_string(rows[i].label) + " outside [0, " +
                                           std::to_string(model.num_classes()) + ")");
    }
  }
  std::vector<InstanceRecord> records(rows.size());
  std::vector<std::exception_ptr> errors(rows.size());
  const long count = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      InstanceRecord rec = analyze_text(model, abstraction, rows[idx].text);
      rec.index = idx;
      rec.trace.instance = idx;
      rec.split = rows[idx].split;
      rec.human_label = rows[idx].label;
      rec.correct = rec.prediction == rec.human_label;
      records[idx] = std::move(rec);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "row " + std::to_string(i) + ": " + e.detail());
    }
  }
  return InstanceTable(std::move(records), model.num_classes(), abstraction.n_states());
}

std::string_view to_string(SortKey key) {
  switch (key) {
    case SortKey::Index: return "index";
    case SortKey::Text: return "text";
    case SortKey::Prediction: return "prediction";
    case SortKey::Label: return "label";
    case SortKey::Correct: return "correct";
    case SortKey::Length: return "length";
  }
  return "index";
}

SortKey parse_sort_key(std::string_view s) {
  for (SortKey k : {SortKey::Index, SortKey::Text, SortKey::Prediction, SortKey::Label,
                    SortKey::Correct, SortKey::Length}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::BadQuery, "unknown sort key '" + std::string(s) + "'");
}

QueryResult query(const InstanceTable& table, const QuerySpec& spec) {
  if (spec.page < 1) throw Error(ErrorCode::BadQuery, "page must be at least 1");
  if (spec.page_size < 1 || spec.page_size > 500) {
    throw Error(ErrorCode::BadQuery, "page_size must be in [1, 500]");
  }
  if (spec.pattern && spec.pattern->empty()) throw Error(ErrorCode::BadQuery, "pattern is empty");
  std::optional<TextMatcher> matcher;
  if (spec.text) matcher.emplace(*spec.text);

  std::vector<std::size_t> candidates;
  if (spec.state) {
    candidates = table.visiting(*spec.state);
  } else if (spec.split) {
    candidates = table.split_members(*spec.split);
  } else {
    candidates.resize(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) candidates[i] = i;
  }

  QueryResult result;
  result.label_distribution.assign(static_cast<std::size_t>(table.n_classes()), 0);
  result.prediction_distribution.assign(static_cast<std::size_t>(table.n_classes()), 0);
  std::vector<std::size_t> hits;
  for (std::size_t i : candidates) {
    const InstanceRecord& r = table.at(i);
    if (spec.split && r.split != *spec.split) continue;
    if (spec.correct && r.correct != *spec.correct) continue;
    if (spec.prediction && r.prediction != *spec.prediction) continue;
    if (spec.human_label && r.human_label != *spec.human_label) continue;
    if (spec.pattern && !first_match(r.trace.states, *spec.pattern, spec.pattern_max_gap)) continue;
    if (matcher && !matcher->matches(r.text)) continue;
    hits.push_back(i);
    if (r.human_label >= 0 && r.human_label < table.n_classes()) {
      ++result.label_distribution[static_cast<std::size_t>(r.human_label)];
    }
    if (r.prediction >= 0 && r.prediction < table.n_classes()) {
      ++result.prediction_distribution[static_cast<std::size_t>(r.prediction)];
    }
  }
  result.total_count = hits.size();

  const auto compare_key = [&](const InstanceRecord& a, const InstanceRecord& b) -> int {
    const auto cmp = [](const auto& x, const auto& y) { return x < y ? -1 : (y < x ? 1 : 0); };
    switch (spec.sort) {
      case SortKey::Index: return cmp(a.index, b.index);
      case SortKey::Text: return cmp(a.text, b.text);
      case SortKey::Prediction: return cmp(a.prediction, b.prediction);
      case SortKey::Label: return cmp(a.human_label, b.human_label);
      case SortKey::Correct: return cmp(a.correct, b.correct);
      case SortKey::Length: return cmp(a.trace.states.size(), b.trace.states.size());
    }
    return 0;
  };
  std::sort(hits.begin(), hits.end(), [&](std::size_t x, std::size_t y) {
    const int c = compare_key(table.at(x), table.at(y));
    if (c != 0) return spec.descending ? c > 0 : c < 0;
    return x < y;
  });

  const std::size_t begin = static_cast<std::size_t>(spec.page - 1) * static_cast<std::size_t>(spec.page_size);
  for (std::size_t i = begin; i < hits.size() && i < begin + static_cast<std::size_t>(spec.page_size); ++i) {
    result.page.push_back(hits[i]);
  }
  return result;
}

std::vector<TextSpan> find_spans(std::string_view text, const TextQuery& query) {
  return TextMatcher(query).spans(text);
}

std::vector<SearchHit> search_spans(const InstanceTable& table, const TextQuery& query) {
  const TextMatcher matcher(query);
  std::vector<SearchHit> out;
  for (const InstanceRecord& r : table.records()) {
    auto spans = matcher.spans(r.text);
    if (!spans.empty()) out.push_back(SearchHit{r.index, std::move(spans)});
  }
  return out;
}

json instance_to_json(const InstanceRecord& r) {
  json pieces = json::array();
  json word_start = json::array();
  json ids = json::array();
  for (const Token& t : r.trace.tokens) {
    pieces.push_back(t.piece);
    word_start.push_back(t.word_start);
    ids.push_back(t.id);
  }
  return json{{"index", r.index},
              {"split", to_string(r.split)},
              {"text", r.text},
              {"tokens", std::move(pieces)},
              {"word_start", std::move(word_start)},
              {"token_ids", std::move(ids)},
              {"states", r.trace.states},
              {"intermediate_labels", r.trace.labels},
              {"prediction", r.prediction},
              {"human_label", r.human_label},
              {"correct", r.correct}};
}

InstanceRecord instance_from_json(const json& j) {
  try {
    InstanceRecord r;
    r.index = j.at("index").get<std::size_t>();
    r.split = parse_split(j.at("split").get<std::string>());
    r.text = j.at("text").get<std::string>();
    const auto pieces = j.at("tokens").get<std::vector<std::string>>();
    const auto word_start = j.at("word_start").get<std::vector<bool>>();
    const auto ids = j.at("token_ids").get<std::vector<int>>();
    if (pieces.size() != ids.size() || word_start.size() != ids.size()) {
      throw Error(ErrorCode::MalformedTrace, "token arrays differ in length");
    }
    for (std::size_t t = 0; t < ids.size(); ++t) r.trace.tokens.push_back(Token{ids[t], pieces[t], word_start[t]});
    r.trace.instance = r.index;
    r.trace.states = j.at("states").get<std::vector<int>>();
    r.trace.labels = j.at("intermediate_labels").get<std::vector<int>>();
    if (r.trace.states.size() != ids.size() || r.trace.labels.size() != ids.size()) {
      throw Error(ErrorCode::MalformedTrace, "trace length differs from token count");
    }
    r.prediction = j.at("prediction").get<int>();
    r.human_label = j.at("human_label").get<int>();
    r.correct = j.at("correct").get<bool>();
    if (r.correct != (r.prediction == r.human_label)) {
      throw Error(ErrorCode::MalformedTrace, "correct flag disagrees with prediction and label");
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedTrace, std::string("instance: ") + e.what());
  }
}

json query_result_to_json(const InstanceTable& table, const QueryResult& result) {
  json instances = json::array();
  for (std::size_t i : result.page) instances.push_back(instance_to_json(table.at(i)));
  return json{{"total_count", result.total_count},
              {"label_distribution", result.label_distribution},
              {"prediction_distribution", result.prediction_distribution},
              {"instances", std::move(instances)}};
}

}  // namespace seer
