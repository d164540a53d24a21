#include "seer/model.hpp"

#include <cmath>

#include "seer/error.hpp"
#include "seer/random.hpp"

namespace seer {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::BadModelFile, std::string(name) + " has inconsistent dimensions");
  }
  if (!m.allFinite()) throw Error(ErrorCode::BadModelFile, std::string(name) + " has non-finite entries");
}

void require_size(const Vector& v, Eigen::Index size, const char* name) {
  if (v.size() != size) {
    throw Error(ErrorCode::BadModelFile, std::string(name) + " has inconsistent dimensions");
  }
  if (!v.allFinite()) throw Error(ErrorCode::BadModelFile, std::string(name) + " has non-finite entries");
}

}  // namespace

void ModelBundle::validate() const {
  const Eigen::Index v = vocab.size();
  const Eigen::Index de = embedding.cols();
  const Eigen::Index dh = gru.u_update.rows();
  const Eigen::Index k = head_bias.size();
  if (v < 1) throw Error(ErrorCode::BadModelFile, "vocabulary is empty");
  if (dh < 1) throw Error(ErrorCode::BadModelFile, "hidden dimension must be at least 1");
  if (de < 1) throw Error(ErrorCode::BadModelFile, "embedding dimension must be at least 1");
  if (k < 2) throw Error(ErrorCode::BadModelFile, "need at least two classes");
  if (static_cast<Eigen::Index>(class_names.size()) != k) {
    throw Error(ErrorCode::BadModelFile, "class_names must have one entry per class");
  }
  require_shape(embedding, v, de, "embedding");
  require_shape(gru.w_update, de, dh, "w_update");
  require_shape(gru.w_reset, de, dh, "w_reset");
  require_shape(gru.w_candidate, de, dh, "w_candidate");
  require_shape(gru.u_update, dh, dh, "u_update");
  require_shape(gru.u_reset, dh, dh, "u_reset");
  require_shape(gru.u_candidate, dh, dh, "u_candidate");
  require_size(gru.b_update, dh, "b_update");
  require_size(gru.b_reset, dh, "b_reset");
  require_size(gru.b_candidate, dh, "b_candidate");
  require_shape(head, dh, k, "head");
  require_size(head_bias, k, "head_bias");
}

bool operator==(const ModelBundle& a, const ModelBundle& b) {
  const auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return a.vocab == b.vocab && a.class_names == b.class_names && same(a.embedding, b.embedding) &&
         same(a.gru.w_update, b.gru.w_update) && same(a.gru.w_reset, b.gru.w_reset) &&
         same(a.gru.w_candidate, b.gru.w_candidate) && same(a.gru.u_update, b.gru.u_update) &&
         same(a.gru.u_reset, b.gru.u_reset) && same(a.gru.u_candidate, b.gru.u_candidate) &&
         same(a.gru.b_update, b.gru.b_update) && same(a.gru.b_reset, b.gru.b_reset) &&
         same(a.gru.b_candidate, b.gru.b_candidate) && same(a.head, b.head) &&
         same(a.head_bias, b.head_bias);
}

std::vector<int> HiddenTrace::intermediate_labels() const {
  std::vector<int> labels;
  labels.reserve(probs.size());
  for (const Vector& p : probs) labels.push_back(argmax(p));
  return labels;
}

int argmax(const Vector& v) {
  int best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = static_cast<int>(i);
  }
  return best;
}

Vector gru_step(const ModelBundle& model, const Vector& h_prev, int token_id) {
  if (token_id < 0 || token_id >= model.vocab_size()) {
    throw Error(ErrorCode::IndexOutOfVocab, "token id " + std::to_string(token_id) +
                                                " outside vocabulary of size " +
                                                std::to_string(model.vocab_size()));
  }
  const GruWeights& g = model.gru;
  const Vector x = model.embedding.row(token_id).transpose();

  Vector z = g.w_update.transpose() * x + g.u_update.transpose() * h_prev + g.b_update;
  Vector r = g.w_reset.transpose() * x + g.u_reset.transpose() * h_prev + g.b_reset;
  z = z.unaryExpr([](double a) { return sigmoid(a); });
  r = r.unaryExpr([](double a) { return sigmoid(a); });
  const Vector gated = r.cwiseProduct(h_prev);
  Vector c = g.w_candidate.transpose() * x + g.u_candidate.transpose() * gated + g.b_candidate;
  c = c.array().tanh().matrix();
  return z.cwiseProduct(h_prev) + (Vector::Ones(z.size()) - z).cwiseProduct(c);
}

Vector softmax(const Vector& logits) {
  if (!logits.allFinite()) throw Error(ErrorCode::NonFiniteLogits, "softmax input is not finite");
  const double shift = logits.maxCoeff();
  Vector e = (logits.array() - shift).exp().matrix();
  return e / e.sum();
}

Vector predict_probs(const ModelBundle& model, const Vector& hidden) {
  return softmax(model.head.transpose() * hidden + model.head_bias);
}

HiddenTrace forward_trace(const ModelBundle& model, std::span<const int> token_ids) {
  if (token_ids.empty()) throw Error(ErrorCode::EmptyInput, "token sequence is empty");
  HiddenTrace trace;
  trace.token_ids.assign(token_ids.begin(), token_ids.end());
  trace.hidden.reserve(token_ids.size());
  trace.probs.reserve(token_ids.size());
  Vector h = Vector::Zero(model.hidden_dim());
  for (int id : token_ids) {
    h = gru_step(model, h, id);
    trace.hidden.push_back(h);
    trace.probs.push_back(predict_probs(model, h));
  }
  trace.final_label = argmax(trace.probs.back());
  return trace;
}

HiddenTrace forward_text(const ModelBundle& model, std::string_view text) {
  const std::vector<int> ids = tokenize(text, model.vocab);
  return forward_trace(model, ids);
}

ModelBundle init_model(Vocabulary vocab, int embed_dim, int hidden_dim,
                       std::vector<std::string> class_names, std::uint64_t seed) {
  if (embed_dim < 1 || hidden_dim < 1) throw Error(ErrorCode::BadDimension, "dimensions must be positive");
  if (class_names.size() < 2) throw Error(ErrorCode::BadDimension, "need at least two classes");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  const auto fill = [&](Eigen::Index rows, Eigen::Index cols, double s) {
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-s, s);
    return m;
  };
  ModelBundle m;
  const Eigen::Index v = vocab.size();
  const Eigen::Index k = static_cast<Eigen::Index>(class_names.size());
  m.vocab = std::move(vocab);
  m.class_names = std::move(class_names);
  m.embedding = fill(v, embed_dim, 1.0);
  m.gru.w_update = fill(embed_dim, hidden_dim, scale);
  m.gru.w_reset = fill(embed_dim, hidden_dim, scale);
  m.gru.w_candidate = fill(embed_dim, hidden_dim, scale);
  m.gru.u_update = fill(hidden_dim, hidden_dim, scale);
  m.gru.u_reset = fill(hidden_dim, hidden_dim, scale);
  m.gru.u_candidate = fill(hidden_dim, hidden_dim, scale);
  m.gru.b_update = fill(hidden_dim, 1, scale);
  m.gru.b_reset = fill(hidden_dim, 1, scale);
  m.gru.b_candidate = fill(hidden_dim, 1, scale);
  m.head = fill(hidden_dim, k, scale);
  m.head_bias = Vector::Zero(k);
  return m;
}

}  // namespace seer
