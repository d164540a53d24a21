#include "seer/fsm.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "seer/error.hpp"

namespace seer {

namespace {

int majority(const std::vector<long>& counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

bool all_zero(const std::vector<long>& counts) {
  return std::all_of(counts.begin(), counts.end(), [](long c) { return c == 0; });
}

}  // namespace

std::vector<std::vector<PhraseCount>> associate_phrases(int n_states,
                                                        std::span<const TraceRecord> traces,
                                                        int max_len, int top) {
  std::vector<std::unordered_map<std::string, long>> counts(static_cast<std::size_t>(n_states));
  for (const TraceRecord& tr : traces) {
    const std::size_t len = std::min(tr.tokens.size(), tr.states.size());
    for (std::size_t end = 0; end < len; ++end) {
      const int s = tr.states[end];
      if (s < 0 || s >= n_states) continue;
      for (int w = 1; w <= max_len && static_cast<std::size_t>(w) <= end + 1; ++w) {
        const std::size_t begin = end + 1 - static_cast<std::size_t>(w);
        std::span<const Token> window(tr.tokens.data() + begin, static_cast<std::size_t>(w));
        ++counts[static_cast<std::size_t>(s)][join_pieces(window)];
      }
    }
  }
  std::vector<std::vector<PhraseCount>> index(static_cast<std::size_t>(n_states));
  for (int s = 0; s < n_states; ++s) {
    auto& out = index[static_cast<std::size_t>(s)];
    for (auto& [text, support] : counts[static_cast<std::size_t>(s)]) out.push_back({text, support});
    std::sort(out.begin(), out.end(), [](const PhraseCount& a, const PhraseCount& b) {
      return a.support != b.support ? a.support > b.support : a.text < b.text;
    });
    if (static_cast<int>(out.size()) > top) out.resize(static_cast<std::size_t>(std::max(top, 0)));
  }
  return index;
}

StateMachine build_fsm(int n_states, int n_classes, std::span<const TraceRecord> traces,
                       const PhraseOptions& phrases) {
  if (n_states < 1 || n_classes < 1) {
    throw Error(ErrorCode::MalformedTrace, "state and class counts must be positive");
  }
  StateMachine fsm;
  fsm.n_states = n_states;
  fsm.n_classes = n_classes;
  fsm.nodes.assign(static_cast<std::size_t>(n_states),
                   StateNode{0, std::vector<long>(static_cast<std::size_t>(n_classes), 0),
                             std::vector<long>(static_cast<std::size_t>(n_classes), 0),
                             {}});

  for (const TraceRecord& tr : traces) {
    const std::string where = "instance " + std::to_string(tr.instance);
    if (tr.states.size() != tr.labels.size()) {
      throw Error(ErrorCode::MalformedTrace, where + ": states and predictions differ in length");
    }
    if (tr.states.empty()) throw Error(ErrorCode::MalformedTrace, where + ": empty trace");
    std::set<int> visited;
    for (std::size_t t = 0; t < tr.states.size(); ++t) {
      const int s = tr.states[t];
      const int c = tr.labels[t];
      if (s < 0 || s >= n_states) throw Error(ErrorCode::MalformedTrace, where + ": state out of range");
      if (c < 0 || c >= n_classes) throw Error(ErrorCode::MalformedTrace, where + ": label out of range");
      visited.insert(s);
      ++fsm.nodes[static_cast<std::size_t>(s)].occurrence_class_counts[static_cast<std::size_t>(c)];
      if (t + 1 < tr.states.size()) ++fsm.edges[{s, tr.states[t + 1]}];
    }
    for (int s : visited) ++fsm.nodes[static_cast<std::size_t>(s)].distinct_visits;
    ++fsm.nodes[static_cast<std::size_t>(tr.states.back())]
          .final_class_counts[static_cast<std::size_t>(tr.labels.back())];
  }

  if (phrases.max_len > 0) {
    auto index = associate_phrases(n_states, traces, phrases.max_len, phrases.top);
    for (int s = 0; s < n_states; ++s) {
      fsm.nodes[static_cast<std::size_t>(s)].phrases = std::move(index[static_cast<std::size_t>(s)]);
    }
  }
  return fsm;
}

StateDetails state_details(const StateMachine& fsm, int state_id) {
  if (state_id < 0 || state_id >= fsm.n_states) {
    throw Error(ErrorCode::UnknownState, "state " + std::to_string(state_id) + " does not exist");
  }
  const StateNode& node = fsm.nodes[static_cast<std::size_t>(state_id)];
  return StateDetails{state_id, node.distinct_visits, node.occurrence_class_counts,
                      node.final_class_counts, node.phrases};
}

int abstract_predict(const StateMachine& fsm, std::span<const int> states) {
  if (states.empty()) return 0;
  const int last = states.back();
  if (last < 0 || last >= fsm.n_states) return 0;
  const StateNode& node = fsm.nodes[static_cast<std::size_t>(last)];
  if (!all_zero(node.final_class_counts)) return majority(node.final_class_counts);
  if (!all_zero(node.occurrence_class_counts)) return majority(node.occurrence_class_counts);
  return 0;
}

json fsm_to_json(const StateMachine& fsm) {
  json nodes = json::array();
  for (int s = 0; s < fsm.n_states; ++s) {
    const StateNode& node = fsm.nodes[static_cast<std::size_t>(s)];
    json phrases = json::array();
    for (const PhraseCount& p : node.phrases) phrases.push_back(json::array({p.text, p.support}));
    nodes.push_back({{"id", s},
                     {"distinct_visits", node.distinct_visits},
                     {"occ_counts", node.occurrence_class_counts},
                     {"final_counts", node.final_class_counts},
                     {"phrases", std::move(phrases)}});
  }
  json edges = json::array();
  for (const auto& [key, count] : fsm.edges) edges.push_back(json::array({key.first, key.second, count}));
  return json{{"version", kFsmVersion},
              {"n_states", fsm.n_states},
              {"n_classes", fsm.n_classes},
              {"nodes", std::move(nodes)},
              {"edges", std::move(edges)}};
}

StateMachine fsm_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("version", std::string()) != kFsmVersion) {
      throw Error(ErrorCode::VersionMismatch, "unsupported FSM version");
    }
    StateMachine fsm;
    fsm.n_states = j.at("n_states").get<int>();
    fsm.n_classes = j.at("n_classes").get<int>();
    const json& nodes = j.at("nodes");
    if (static_cast<int>(nodes.size()) != fsm.n_states) {
      throw Error(ErrorCode::BadModelFile, "fsm node count differs from n_states");
    }
    for (const json& n : nodes) {
      StateNode node;
      node.distinct_visits = n.at("distinct_visits").get<long>();
      node.occurrence_class_counts = n.at("occ_counts").get<std::vector<long>>();
      node.final_class_counts = n.at("final_counts").get<std::vector<long>>();
      for (const json& p : n.at("phrases")) {
        node.phrases.push_back({p.at(0).get<std::string>(), p.at(1).get<long>()});
      }
      fsm.nodes.push_back(std::move(node));
    }
    for (const json& e : j.at("edges")) {
      const int from = e.at(0).get<int>();
      const int to = e.at(1).get<int>();
      if (from < 0 || to < 0 || from >= fsm.n_states || to >= fsm.n_states) {
        throw Error(ErrorCode::BadModelFile, "fsm edge endpoint out of range");
      }
      fsm.edges[{from, to}] = e.at(2).get<long>();
    }
    return fsm;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadModelFile, std::string("fsm: ") + e.what());
  }
}

json state_details_to_json(const StateDetails& d) {
  json phrases = json::array();
  for (const PhraseCount& p : d.phrases) phrases.push_back(json::array({p.text, p.support}));
  return json{{"id", d.id},
              {"distinct_visits", d.distinct_visits},
              {"occ_counts", d.occurrence_class_counts},
              {"final_counts", d.final_class_counts},
              {"phrases", std::move(phrases)}};
}

}  // namespace seer
