#include "seer/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "seer/error.hpp"
#include "seer/random.hpp"

namespace seer {

namespace {

struct StepCache {
  Vector x, h_prev, z, r, gated, c;
};

double sigmoid(double a) {
  if (a >= 0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

template <typename Fn>
void visit(Matrix& p, Matrix& g, Fn& fn) {
  for (Eigen::Index i = 0; i < p.size(); ++i) fn(p.data()[i], g.data()[i]);
}
template <typename Fn>
void visit(Vector& p, Vector& g, Fn& fn) {
  for (Eigen::Index i = 0; i < p.size(); ++i) fn(p.data()[i], g.data()[i]);
}

}  // namespace

Gradients Gradients::zeros_like(const ModelBundle& m) {
  Gradients g;
  g.embedding = Matrix::Zero(m.embedding.rows(), m.embedding.cols());
  const auto zm = [](const Matrix& a) { return Matrix::Zero(a.rows(), a.cols()).eval(); };
  const auto zv = [](const Vector& a) { return Vector::Zero(a.size()).eval(); };
  g.gru = GruWeights{zm(m.gru.w_update), zm(m.gru.w_reset), zm(m.gru.w_candidate),
                     zm(m.gru.u_update), zm(m.gru.u_reset), zm(m.gru.u_candidate),
                     zv(m.gru.b_update), zv(m.gru.b_reset), zv(m.gru.b_candidate)};
  g.head = zm(m.head);
  g.head_bias = zv(m.head_bias);
  return g;
}

void Gradients::set_zero() {
  embedding.setZero();
  gru.w_update.setZero();
  gru.w_reset.setZero();
  gru.w_candidate.setZero();
  gru.u_update.setZero();
  gru.u_reset.setZero();
  gru.u_candidate.setZero();
  gru.b_update.setZero();
  gru.b_reset.setZero();
  gru.b_candidate.setZero();
  head.setZero();
  head_bias.setZero();
}

double Gradients::squared_norm() const {
  return embedding.squaredNorm() + gru.w_update.squaredNorm() + gru.w_reset.squaredNorm() +
         gru.w_candidate.squaredNorm() + gru.u_update.squaredNorm() +
         gru.u_reset.squaredNorm() + gru.u_candidate.squaredNorm() +
         gru.b_update.squaredNorm() + gru.b_reset.squaredNorm() +
         gru.b_candidate.squaredNorm() + head.squaredNorm() + head_bias.squaredNorm();
}

void for_each_parameter(ModelBundle& m, Gradients& g,
                        const std::function<void(double&, double&)>& fn) {
  visit(m.embedding, g.embedding, fn);
  visit(m.gru.w_update, g.gru.w_update, fn);
  visit(m.gru.w_reset, g.gru.w_reset, fn);
  visit(m.gru.w_candidate, g.gru.w_candidate, fn);
  visit(m.gru.u_update, g.gru.u_update, fn);
  visit(m.gru.u_reset, g.gru.u_reset, fn);
  visit(m.gru.u_candidate, g.gru.u_candidate, fn);
  visit(m.gru.b_update, g.gru.b_update, fn);
  visit(m.gru.b_reset, g.gru.b_reset, fn);
  visit(m.gru.b_candidate, g.gru.b_candidate, fn);
  visit(m.head, g.head, fn);
  visit(m.head_bias, g.head_bias, fn);
}

double loss_and_gradient(const ModelBundle& model, std::span<const int> token_ids, int label,
                         Gradients& grad) {
  if (token_ids.empty()) throw Error(ErrorCode::EmptyInput, "token sequence is empty");
  if (label < 0 || label >= model.num_classes()) {
    throw Error(ErrorCode::BadLabel, "label " + std::to_string(label) + " out of range");
  }
  const GruWeights& w = model.gru;
  const Eigen::Index dh = model.hidden_dim();

  std::vector<StepCache> steps(token_ids.size());
  Vector h = Vector::Zero(dh);
  for (std::size_t t = 0; t < token_ids.size(); ++t) {
    const int id = token_ids[t];
    if (id < 0 || id >= model.vocab_size()) {
      throw Error(ErrorCode::IndexOutOfVocab, "token id " + std::to_string(id) + " outside vocabulary");
    }
    StepCache& s = steps[t];
    s.x = model.embedding.row(id).transpose();
    s.h_prev = h;
    s.z = (w.w_update.transpose() * s.x + w.u_update.transpose() * h + w.b_update)
              .unaryExpr([](double a) { return sigmoid(a); });
    s.r = (w.w_reset.transpose() * s.x + w.u_reset.transpose() * h + w.b_reset)
              .unaryExpr([](double a) { return sigmoid(a); });
    s.gated = s.r.cwiseProduct(h);
    s.c = (w.w_candidate.transpose() * s.x + w.u_candidate.transpose() * s.gated + w.b_candidate)
              .array()
              .tanh()
              .matrix();
    h = s.z.cwiseProduct(h) + (Vector::Ones(dh) - s.z).cwiseProduct(s.c);
  }

  const Vector probs = softmax(model.head.transpose() * h + model.head_bias);
  const double loss = -std::log(std::max(probs[label], std::numeric_limits<double>::min()));

  Vector dlogits = probs;
  dlogits[label] -= 1.0;
  grad.head.noalias() += h * dlogits.transpose();
  grad.head_bias += dlogits;
  Vector dh_next = model.head * dlogits;

  for (std::size_t t = token_ids.size(); t-- > 0;) {
    const StepCache& s = steps[t];
    const Vector dz = dh_next.cwiseProduct(s.h_prev - s.c);
    const Vector dc = dh_next.cwiseProduct(Vector::Ones(dh) - s.z);
    const Vector da_c = dc.cwiseProduct((Vector::Ones(dh) - s.c.cwiseProduct(s.c)));
    const Vector dgated = w.u_candidate * da_c;
    const Vector dr = dgated.cwiseProduct(s.h_prev);
    const Vector da_z = dz.cwiseProduct(s.z.cwiseProduct(Vector::Ones(dh) - s.z));
    const Vector da_r = dr.cwiseProduct(s.r.cwiseProduct(Vector::Ones(dh) - s.r));

    grad.gru.w_candidate.noalias() += s.x * da_c.transpose();
    grad.gru.u_candidate.noalias() += s.gated * da_c.transpose();
    grad.gru.b_candidate += da_c;
    grad.gru.w_update.noalias() += s.x * da_z.transpose();
    grad.gru.u_update.noalias() += s.h_prev * da_z.transpose();
    grad.gru.b_update += da_z;
    grad.gru.w_reset.noalias() += s.x * da_r.transpose();
    grad.gru.u_reset.noalias() += s.h_prev * da_r.transpose();
    grad.gru.b_reset += da_r;

    const Vector dx = w.w_update * da_z + w.w_reset * da_r + w.w_candidate * da_c;
    grad.embedding.row(token_ids[t]) += dx.transpose();

    dh_next = dgated.cwiseProduct(s.r) + dh_next.cwiseProduct(s.z) + w.u_update * da_z +
              w.u_reset * da_r;
  }
  return loss;
}

double sequence_loss(const ModelBundle& model, std::span<const int> token_ids, int label) {
  const HiddenTrace trace = forward_trace(model, token_ids);
  return -std::log(std::max(trace.probs.back()[label], std::numeric_limits<double>::min()));
}

double accuracy(const ModelBundle& model, const std::vector<LabeledText>& rows) {
  if (rows.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t hits = 0;
  for (const LabeledText& row : rows) {
    if (forward_text(model, row.text).final_label == row.label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

TrainReport train(const TrainConfig& config, const std::vector<LabeledText>& dataset,
                  std::vector<std::string> class_names) {
  const std::vector<LabeledText> train_rows = select_split(dataset, Split::Train);
  const std::vector<LabeledText> test_rows = select_split(dataset, Split::Test);
  if (train_rows.empty()) throw Error(ErrorCode::EmptyDataset, "no training rows");

  int max_label = 0;
  for (const LabeledText& row : dataset) {
    if (row.label < 0) throw Error(ErrorCode::BadLabel, "negative label");
    max_label = std::max(max_label, row.label);
  }
  if (class_names.empty()) {
    for (int c = 0; c <= std::max(1, max_label); ++c) class_names.push_back(std::to_string(c));
  }
  const int num_classes = static_cast<int>(class_names.size());
  if (max_label >= num_classes) {
    throw Error(ErrorCode::BadLabel, "label " + std::to_string(max_label) + " ≥ class count " +
                                         std::to_string(num_classes));
  }

  const std::vector<std::string> texts = texts_of(train_rows);
  Vocabulary vocab = build_vocabulary(texts, config.max_vocab_words);
  std::vector<std::vector<int>> encoded;
  encoded.reserve(train_rows.size());
  for (const LabeledText& row : train_rows) encoded.push_back(tokenize(row.text, vocab));

  TrainReport report;
  report.model = init_model(std::move(vocab), config.embed_dim, config.hidden_dim,
                            std::move(class_names), config.seed);
  ModelBundle& model = report.model;

  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(train_rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Gradients grad = Gradients::zeros_like(model);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double total = 0.0;
    for (std::size_t i : order) {
      grad.set_zero();
      total += loss_and_gradient(model, encoded[i], train_rows[i].label, grad);
      const double norm = std::sqrt(grad.squared_norm());
      const double scale =
          config.learning_rate * (norm > config.clip_norm ? config.clip_norm / norm : 1.0);
      for_each_parameter(model, grad, [scale](double& p, double& g) { p -= scale * g; });
    }
    report.epoch_loss.push_back(total / static_cast<double>(train_rows.size()));
  }

  report.train_accuracy = accuracy(model, train_rows);
  report.test_accuracy = accuracy(model, test_rows);
  return report;
}

}  // namespace seer
