#include "seer/patterns.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "seer/error.hpp"
#include "seer/model.hpp"

namespace seer {

namespace {

bool ranks_before(const std::vector<int>& a, long sa, const std::vector<int>& b, long sb) {
  if (sa != sb) return sa > sb;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::vector<PhraseCount> rank_phrases(const std::map<std::string, long>& counts, int limit) {
  std::vector<PhraseCount> out;
  for (const auto& [text, support] : counts) out.push_back({text, support});
  std::stable_sort(out.begin(), out.end(),
                   [](const PhraseCount& a, const PhraseCount& b) { return a.support > b.support; });
  if (static_cast<int>(out.size()) > limit) out.resize(static_cast<std::size_t>(std::max(limit, 0)));
  return out;
}

std::string span_text(const TraceRecord& tr, std::size_t begin, std::size_t end) {
  end = std::min(end, tr.tokens.size());
  if (begin >= end) return {};
  return join_pieces(std::span<const Token>(tr.tokens.data() + begin, end - begin));
}

// Top-k keeper ordered best-first; the last element is the current threshold.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) {}

  bool full() const { return items_.size() >= k_; }
  long threshold() const { return full() ? items_.back().support : 0; }

  void offer(const std::vector<int>& states, long support) {
    if (full() && !ranks_before(states, support, items_.back().states, items_.back().support)) return;
    auto pos = std::upper_bound(items_.begin(), items_.end(), SequencePattern{states, support},
                                [](const SequencePattern& a, const SequencePattern& b) {
                                  return ranks_before(a.states, a.support, b.states, b.support);
                                });
    items_.insert(pos, SequencePattern{states, support});
    if (items_.size() > k_) items_.pop_back();
  }

  std::vector<SequencePattern> take() { return std::move(items_); }

 private:
  std::size_t k_;
  std::vector<SequencePattern> items_;
};

// Per trace, the sorted end positions of every embedding of the current prefix.
using Projection = std::vector<std::pair<std::size_t, std::vector<std::size_t>>>;

struct Miner {
  std::span<const std::vector<int>> db;
  int min_len;
  int max_len;
  int max_gap;
  TopK top;

  void grow(std::vector<int>& prefix, const Projection& projection) {
    if (static_cast<int>(prefix.size()) >= max_len) return;
    std::map<int, Projection> extensions;
    for (const auto& [trace, ends] : projection) {
      const std::vector<int>& seq = db[trace];
      std::map<int, std::set<std::size_t>> next;
      for (std::size_t e : ends) {
        const std::size_t last = std::min(seq.size(), e + 2 + static_cast<std::size_t>(max_gap));
        for (std::size_t p = e + 1; p < last; ++p) next[seq[p]].insert(p);
      }
      for (auto& [item, positions] : next) {
        extensions[item].emplace_back(trace, std::vector<std::size_t>(positions.begin(), positions.end()));
      }
    }
    explore(prefix, extensions);
  }

  void explore(std::vector<int>& prefix, std::map<int, Projection>& extensions) {
    std::vector<std::pair<int, long>> order;
    for (const auto& [item, proj] : extensions) order.emplace_back(item, static_cast<long>(proj.size()));
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [item, support] : order) {
      if (top.full() && support < top.threshold()) break;
      prefix.push_back(item);
      if (static_cast<int>(prefix.size()) >= min_len) top.offer(prefix, support);
      grow(prefix, extensions[item]);
      prefix.pop_back();
    }
  }
};

bool embeds(std::span<const int> states, std::span<const int> pattern, int max_gap) {
  return first_match(states, pattern, max_gap).has_value();
}

}  // namespace

std::string_view to_string(PatternKind kind) {
  return kind == PatternKind::Influential ? "influential" : "buggy";
}

std::vector<std::size_t> find_pivots(std::span<const int> labels) {
  std::vector<std::size_t> pivots;
  for (std::size_t t = 1; t < labels.size(); ++t) {
    if (labels[t] != labels[t - 1]) pivots.push_back(t);
  }
  return pivots;
}

std::vector<std::size_t> find_pivots(std::span<const Eigen::VectorXd> probs) {
  std::vector<int> labels;
  labels.reserve(probs.size());
  for (const Eigen::VectorXd& p : probs) labels.push_back(argmax(p));
  return find_pivots(labels);
}

std::vector<PatternEntry> mine_influential(std::span<const TraceRecord> traces, int window,
                                           int top_k, int max_phrases, int max_samples) {
  if (window < 1) throw Error(ErrorCode::BadK, "window must be at least 1");
  if (top_k < 1) throw Error(ErrorCode::BadK, "top_k must be at least 1");
  struct Tally {
    long support = 0;
    std::map<std::string, long> phrases;
    std::vector<std::size_t> samples;
  };
  std::map<std::vector<int>, Tally> tallies;
  for (const TraceRecord& tr : traces) {
    for (std::size_t pivot : find_pivots(tr.labels)) {
      if (pivot >= tr.states.size()) continue;
      const std::size_t begin = pivot + 1 >= static_cast<std::size_t>(window)
                                    ? pivot + 1 - static_cast<std::size_t>(window)
                                    : 0;
      std::vector<int> key(tr.states.begin() + static_cast<std::ptrdiff_t>(begin),
                           tr.states.begin() + static_cast<std::ptrdiff_t>(pivot + 1));
      Tally& tally = tallies[key];
      ++tally.support;
      ++tally.phrases[span_text(tr, begin, pivot + 1)];
      if ((tally.samples.empty() || tally.samples.back() != tr.instance) &&
          static_cast<int>(tally.samples.size()) < max_samples) {
        tally.samples.push_back(tr.instance);
      }
    }
  }
  std::vector<PatternEntry> out;
  for (auto& [states, tally] : tallies) {
    out.push_back(PatternEntry{PatternKind::Influential, states, tally.support,
                               rank_phrases(tally.phrases, max_phrases), tally.samples});
  }
  std::sort(out.begin(), out.end(), [](const PatternEntry& a, const PatternEntry& b) {
    return ranks_before(a.states, a.support, b.states, b.support);
  });
  if (static_cast<int>(out.size()) > top_k) out.resize(static_cast<std::size_t>(top_k));
  return out;
}

std::vector<SequencePattern> mine_topk_subsequences(std::span<const std::vector<int>> db, int k,
                                                    int min_len, int max_len, int max_gap) {
  if (k < 1) throw Error(ErrorCode::BadK, "k must be at least 1");
  if (min_len < 1 || max_len < min_len) {
    throw Error(ErrorCode::BadK, "pattern length bounds must satisfy 1 <= min_len <= max_len");
  }
  if (max_gap < 0) throw Error(ErrorCode::BadK, "max_gap must be non-negative");

  Miner miner{db, min_len, max_len, max_gap, TopK(static_cast<std::size_t>(k))};
  std::map<int, Projection> roots;
  for (std::size_t trace = 0; trace < db.size(); ++trace) {
    std::map<int, std::vector<std::size_t>> positions;
    for (std::size_t p = 0; p < db[trace].size(); ++p) positions[db[trace][p]].push_back(p);
    for (auto& [item, pos] : positions) roots[item].emplace_back(trace, std::move(pos));
  }
  std::vector<int> prefix;
  miner.explore(prefix, roots);
  return miner.top.take();
}

std::vector<PatternEntry> mine_buggy(std::span<const TraceRecord> correct,
                                     std::span<const TraceRecord> wrong, int k,
                                     const MiningConfig& config) {
  if (k < 1) throw Error(ErrorCode::BadK, "k must be at least 1");
  if (wrong.empty()) return {};
  std::vector<std::vector<int>> db;
  db.reserve(wrong.size());
  for (const TraceRecord& tr : wrong) db.push_back(tr.states);
  const auto candidates =
      mine_topk_subsequences(db, 5 * k, config.min_len, config.max_len, config.max_gap);

  std::vector<PatternEntry> out;
  for (const SequencePattern& cand : candidates) {
    const bool seen_in_correct = std::any_of(correct.begin(), correct.end(), [&](const TraceRecord& tr) {
      return embeds(tr.states, cand.states, config.max_gap);
    });
    if (seen_in_correct) continue;
    PatternEntry entry{PatternKind::Buggy, cand.states, cand.support, {}, {}};
    std::map<std::string, long> phrases;
    for (const TraceRecord& tr : wrong) {
      const auto span = first_match(tr.states, cand.states, config.max_gap);
      if (!span) continue;
      ++phrases[span_text(tr, span->first, span->second)];
      if (static_cast<int>(entry.sample_instance_ids.size()) < config.max_samples) {
        entry.sample_instance_ids.push_back(tr.instance);
      }
    }
    entry.phrases = rank_phrases(phrases, config.max_phrases);
    out.push_back(std::move(entry));
    if (static_cast<int>(out.size()) == k) break;
  }
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> first_match(std::span<const int> states,
                                                               std::span<const int> pattern,
                                                               int max_gap) {
  if (pattern.empty() || pattern.size() > states.size()) return std::nullopt;
  const auto gap = static_cast<std::size_t>(std::max(max_gap, 0));
  // Depth-first from each start, trying the earliest admissible position first.
  std::vector<std::size_t> pos(pattern.size());
  for (std::size_t start = 0; start < states.size(); ++start) {
    if (states[start] != pattern[0]) continue;
    pos[0] = start;
    std::size_t depth = 1;
    std::size_t cursor = start + 1;
    while (depth > 0) {
      if (depth == pattern.size()) return std::make_pair(pos[0], pos[depth - 1] + 1);
      const std::size_t limit = std::min(states.size(), pos[depth - 1] + 2 + gap);
      bool advanced = false;
      for (std::size_t p = cursor; p < limit; ++p) {
        if (states[p] == pattern[depth]) {
          pos[depth] = p;
          ++depth;
          cursor = p + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        --depth;
        if (depth == 0) break;
        cursor = pos[depth] + 1;
      }
    }
  }
  return std::nullopt;
}

std::vector<PatternMatch> pattern_instances(std::span<const TraceRecord> traces,
                                            std::span<const int> pattern, int max_gap) {
  std::vector<PatternMatch> out;
  for (const TraceRecord& tr : traces) {
    if (auto span = first_match(tr.states, pattern, max_gap)) {
      out.push_back(PatternMatch{tr.instance, span->first, span->second});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PatternMatch& a, const PatternMatch& b) { return a.instance < b.instance; });
  return out;
}

json pattern_entry_to_json(const PatternEntry& p) {
  json phrases = json::array();
  for (const PhraseCount& ph : p.phrases) phrases.push_back(json::array({ph.text, ph.support}));
  return json{{"kind", to_string(p.kind)},
              {"states", p.states},
              {"support", p.support},
              {"phrases", std::move(phrases)},
              {"sample_instance_ids", p.sample_instance_ids}};
}

json patterns_to_json(const PatternSet& set) {
  json influential = json::array();
  for (const PatternEntry& p : set.influential) influential.push_back(pattern_entry_to_json(p));
  json buggy = json::array();
  for (const PatternEntry& p : set.buggy) buggy.push_back(pattern_entry_to_json(p));
  const MiningConfig& c = set.config;
  return json{{"version", kPatternsVersion},
              {"config",
               {{"window", c.window},
                {"influential_top_k", c.influential_top_k},
                {"buggy_top_k", c.buggy_top_k},
                {"min_len", c.min_len},
                {"max_len", c.max_len},
                {"max_gap", c.max_gap},
                {"max_phrases", c.max_phrases},
                {"max_samples", c.max_samples}}},
              {"influential", std::move(influential)},
              {"buggy", std::move(buggy)}};
}

PatternSet patterns_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("version", std::string()) != kPatternsVersion) {
      throw Error(ErrorCode::VersionMismatch, "unsupported patterns version");
    }
    PatternSet set;
    const json& c = j.at("config");
    set.config = MiningConfig{c.at("window").get<int>(),      c.at("influential_top_k").get<int>(),
                              c.at("buggy_top_k").get<int>(), c.at("min_len").get<int>(),
                              c.at("max_len").get<int>(),     c.at("max_gap").get<int>(),
                              c.at("max_phrases").get<int>(), c.at("max_samples").get<int>()};
    const auto read = [](const json& arr, PatternKind kind) {
      std::vector<PatternEntry> out;
      for (const json& e : arr) {
        PatternEntry p;
        p.kind = kind;
        p.states = e.at("states").get<std::vector<int>>();
        p.support = e.at("support").get<long>();
        for (const json& ph : e.at("phrases")) {
          p.phrases.push_back({ph.at(0).get<std::string>(), ph.at(1).get<long>()});
        }
        p.sample_instance_ids = e.at("sample_instance_ids").get<std::vector<std::size_t>>();
        out.push_back(std::move(p));
      }
      return out;
    };
    set.influential = read(j.at("influential"), PatternKind::Influential);
    set.buggy = read(j.at("buggy"), PatternKind::Buggy);
    return set;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadModelFile, std::string("patterns: ") + e.what());
  }
}

}  // namespace seer
