#include "fixtures.hpp"

#include <sstream>

#include "seer/synthetic.hpp"

namespace seer::testkit {

namespace {

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

void fill(Matrix& m, Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale) {
  m.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-scale, scale);
}

void fill(Vector& v, Eigen::Index n, Rng& rng, double scale) {
  v.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(-scale, scale);
}

const std::vector<std::string> kWords = {"good", "bad", "quarters", "Quarters", "the", "not", "ab", "abab",
                                         "movie", "Plot", "aab", "!!!", "..."};

}  // namespace

Vocabulary make_vocabulary(const std::vector<std::string>& pieces) {
  std::vector<std::string> entries{"<unk>"};
  entries.insert(entries.end(), pieces.begin(), pieces.end());
  return Vocabulary(entries, 0);
}

Vocabulary letter_vocabulary(int size) {
  std::vector<std::string> pieces;
  for (int i = 0; i + 1 < size; ++i) pieces.push_back(std::string(1, static_cast<char>('a' + i)));
  return make_vocabulary(pieces);
}

Vocabulary hypocrisy_vocabulary() {
  return make_vocabulary({"hypo", "cri", "sy", "h", "y", "p", "o", "c", "r", "i", "s", "suck", "it", "up"});
}

ModelBundle random_model(const Vocabulary& vocab, int embed_dim, int hidden_dim, int classes,
                         std::uint64_t seed, double scale) {
  Rng rng(seed);
  ModelBundle m;
  m.vocab = vocab;
  fill(m.embedding, vocab.size(), embed_dim, rng, scale);
  for (Matrix* w : {&m.gru.w_update, &m.gru.w_reset, &m.gru.w_candidate}) fill(*w, embed_dim, hidden_dim, rng, scale);
  for (Matrix* u : {&m.gru.u_update, &m.gru.u_reset, &m.gru.u_candidate}) fill(*u, hidden_dim, hidden_dim, rng, scale);
  for (Vector* b : {&m.gru.b_update, &m.gru.b_reset, &m.gru.b_candidate}) fill(*b, hidden_dim, rng, scale);
  fill(m.head, hidden_dim, classes, rng, scale);
  fill(m.head_bias, classes, rng, scale);
  for (int c = 0; c < classes; ++c) m.class_names.push_back("c" + std::to_string(c));
  m.validate();
  return m;
}

ModelBundle random_model(int vocab_size, int embed_dim, int hidden_dim, int classes, std::uint64_t seed,
                         double scale) {
  return random_model(letter_vocabulary(vocab_size), embed_dim, hidden_dim, classes, seed, scale);
}

TraceRecord make_trace(std::size_t instance, const std::string& text, std::vector<int> states,
                       std::vector<int> labels) {
  TraceRecord tr;
  tr.instance = instance;
  int id = 1;
  for (const auto& w : split_words(text)) {
    std::size_t begin = 0;
    bool first = true;
    while (begin <= w.size()) {
      const std::size_t bar = std::min(w.find('|', begin), w.size());
      tr.tokens.push_back(Token{id++, w.substr(begin, bar - begin), first});
      first = false;
      begin = bar + 1;
    }
  }
  tr.states = std::move(states);
  tr.labels = std::move(labels);
  return tr;
}

InstanceRecord make_record(std::size_t index, Split split, const std::string& text, std::vector<int> states,
                           int prediction, int human_label) {
  InstanceRecord r;
  r.index = index;
  r.split = split;
  r.text = text;
  std::vector<int> labels(states.size(), prediction);
  r.trace = make_trace(index, text, std::move(states), std::move(labels));
  r.prediction = prediction;
  r.human_label = human_label;
  r.correct = prediction == human_label;
  return r;
}

InstanceTable ten_instance_table() {
  std::vector<InstanceRecord> rows;
  const int labels[10] = {0, 1, 1, 0, 1, 0, 0, 1, 1, 0};
  const int preds[10] = {0, 1, 0, 0, 1, 1, 0, 1, 0, 0};  // rows 2, 5 and 8 are wrong
  for (std::size_t i = 0; i < 10; ++i) {
    rows.push_back(make_record(i, i < 7 ? Split::Train : Split::Test, "sentence number " + std::to_string(i),
                               {static_cast<int>(i % 4), static_cast<int>((i + 1) % 4), 3}, preds[i], labels[i]));
  }
  return InstanceTable(std::move(rows), 2, 4);
}

InstanceTable quarters_table() {
  std::vector<InstanceRecord> rows;
  std::size_t index = 0;
  for (int i = 0; i < 27; ++i) {
    rows.push_back(make_record(index++, Split::Train, "three quarters of the film works " + std::to_string(i),
                               {1, 2, 3, 4, 5, 6}, 1, i % 9 == 0 ? 0 : 1));
  }
  rows.push_back(make_record(index++, Split::Train, "Quarters of it drag", {1, 2, 3, 4}, 0, 0));
  for (int i = 0; i < 20; ++i) {
    rows.push_back(make_record(index++, Split::Train, "a plain review " + std::to_string(i), {0, 1, 2, 3}, i % 2, i % 2));
  }
  rows.push_back(make_record(index++, Split::Test, "quarters again", {2, 3}, 1, 1));
  return InstanceTable(std::move(rows), 2, 8);
}

InstanceTable random_table(std::size_t n, std::uint64_t seed, int n_classes, int n_states) {
  Rng rng(seed);
  std::vector<InstanceRecord> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = 1 + rng.below(8);
    std::string text;
    std::vector<int> states;
    for (std::size_t t = 0; t < len; ++t) {
      text += (t ? " " : "") + kWords[rng.below(kWords.size())];
      states.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(n_states))));
    }
    const int pred = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_classes)));
    const int label = rng.uniform() < 0.7 ? pred : static_cast<int>(rng.below(static_cast<std::uint64_t>(n_classes)));
    InstanceRecord r = make_record(i, rng.uniform() < 0.6 ? Split::Train : Split::Test, text, states, pred, label);
    for (int& l : r.trace.labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_classes)));
    rows.push_back(std::move(r));
  }
  return InstanceTable(std::move(rows), n_classes, n_states);
}

QuerySpec random_spec(Rng& rng, const InstanceTable& table) {
  static const std::vector<std::string> keywords = {"good", "QUART", "ab", "the movie", "!!!", "b a", "zzz", "o"};
  static const std::vector<std::string> regexes = {"a+b", "(ab)+", "qu[a-z]+s", "[.!]+", "o+d", "b|d",
                                                   "\\w+ing", "^the", "e$", "[A-Z]\\w*", "ab?a"};
  QuerySpec s;
  const auto n_classes = static_cast<std::uint64_t>(table.n_classes());
  if (rng.uniform() < 0.5) s.split = rng.uniform() < 0.5 ? Split::Train : Split::Test;
  if (rng.uniform() < 0.3) s.correct = rng.uniform() < 0.5;
  if (rng.uniform() < 0.3) s.prediction = static_cast<int>(rng.below(n_classes));
  if (rng.uniform() < 0.3) s.human_label = static_cast<int>(rng.below(n_classes));
  if (rng.uniform() < 0.3) s.state = static_cast<int>(rng.below(static_cast<std::uint64_t>(table.n_states()) + 2)) - 1;
  if (rng.uniform() < 0.3) {
    std::vector<int> p;
    const std::size_t len = 1 + rng.below(3);
    const auto& states = table.at(rng.below(table.size())).trace.states;
    for (std::size_t i = 0; i < len; ++i) {
      p.push_back(rng.uniform() < 0.7 && i < states.size()
                      ? states[i]
                      : static_cast<int>(rng.below(static_cast<std::uint64_t>(table.n_states()))));
    }
    s.pattern = p;
    s.pattern_max_gap = static_cast<int>(rng.below(3));
  }
  if (rng.uniform() < 0.4) {
    const bool regex = rng.uniform() < 0.5;
    s.text = TextQuery{regex ? regexes[rng.below(regexes.size())] : keywords[rng.below(keywords.size())], regex};
  }
  s.sort = static_cast<SortKey>(rng.below(6));
  s.descending = rng.uniform() < 0.5;
  static const int sizes[] = {1, 3, 10, 50, 500};
  s.page_size = sizes[rng.below(5)];
  s.page = 1 + static_cast<int>(rng.below(3));
  return s;
}

std::vector<TraceRecord> hypocrisy_traces() {
  std::vector<TraceRecord> out;
  TraceRecord h;
  h.instance = 0;
  h.tokens = {Token{1, "what", true}, Token{2, "hypo", true}, Token{3, "cri", false}, Token{4, "sy", false}};
  h.states = {4, 13, 9, 9};
  h.labels = {1, 1, 1, 0};
  out.push_back(h);
  for (std::size_t i = 1; i <= 12; ++i) {
    out.push_back(make_trace(i, "you should suck it up", {4, 6, 13, 9, 9}, {1, 1, 1, 1, 0}));
  }
  out.push_back(make_trace(13, "a fine day", {4, 5, 6}, {1, 1, 1}));
  out.push_back(make_trace(14, "not fine", {7, 5}, {0, 1}));
  return out;
}

BuggyFixture punctuation_fixture() {
  BuggyFixture f;
  std::size_t id = 0;
  for (int i = 0; i < 6; ++i) {
    f.correct.push_back(make_trace(id++, "great film overall", {1, 2, 3}, {1, 1, 1}));
    f.correct.push_back(make_trace(id++, "awful plot really", {4, 5, 3}, {0, 0, 0}));
  }
  f.wrong.push_back(make_trace(id++, "great film .|..", {1, 2, 20, 21}, {1, 1, 0, 0}));
  f.wrong.push_back(make_trace(id++, "fine .|.. .|..", {2, 20, 21, 20, 21}, {1, 0, 0, 0, 0}));
  f.wrong.push_back(make_trace(id++, "what !|!!", {6, 30, 30}, {1, 0, 0}));
  f.wrong.push_back(make_trace(id++, "sure !|!! really", {6, 30, 30, 3}, {1, 0, 0, 0}));
  f.wrong.push_back(make_trace(id++, "why ?|??", {7, 40, 41}, {0, 1, 1}));
  f.wrong.push_back(make_trace(id++, "awful plot", {4, 5}, {0, 0}));
  return f;
}

BuggyFixture random_buggy_fixture(std::uint64_t seed) {
  Rng rng(seed);
  BuggyFixture f;
  for (std::size_t i = 0; i < 30; ++i) {
    const std::size_t len = 1 + rng.below(10);
    std::vector<int> states, labels;
    std::string text;
    for (std::size_t t = 0; t < len; ++t) {
      states.push_back(static_cast<int>(rng.below(6)));
      labels.push_back(static_cast<int>(rng.below(2)));
      text += (t ? " w" : "w") + std::to_string(states.back());
    }
    (rng.uniform() < 0.6 ? f.correct : f.wrong).push_back(make_trace(i, text, states, labels));
  }
  return f;
}

SmallPipeline small_pipeline(std::uint64_t seed, std::size_t train, std::size_t test) {
  SyntheticOptions opts;
  opts.train = train;
  opts.test = test;
  opts.seed = seed;
  SmallPipeline p;
  p.rows = make_sentiment_corpus(opts);
  const auto texts = texts_of(select_split(p.rows, Split::Train));
  p.model = random_model(build_vocabulary(texts, 100), 4, 6, 2, seed + 1, 0.8);
  p.model.class_names = {"negative", "positive"};
  p.abstraction = fit_abstraction(p.model, std::span<const std::string>(texts), 4, 6, seed + 2);
  return p;
}

std::vector<LabeledText> keyword_dataset() {
  const std::vector<std::string> fillers = {"the", "movie", "was", "a", "plot", "and"};
  std::vector<LabeledText> rows;
  for (int i = 0; i < 20; ++i) {
    const bool positive = i % 2 == 0;
    std::string text = fillers[static_cast<std::size_t>(i) % fillers.size()] + " " +
                       (positive ? "great" : "awful") + " " + fillers[static_cast<std::size_t>(i + 3) % fillers.size()];
    rows.push_back({text, positive ? 1 : 0, Split::Train});
  }
  return rows;
}

}  // namespace seer::testkit
