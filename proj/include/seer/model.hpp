#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "seer/vocabulary.hpp"

namespace seer {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Row-vector convention: a gate pre-activation is x·W + h·U + b, so input
// matrices are d_e×d_h and recurrent ones d_h×d_h.
struct GruWeights {
  Matrix w_update, w_reset, w_candidate;
  Matrix u_update, u_reset, u_candidate;
  Vector b_update, b_reset, b_candidate;
};

/// Single-layer GRU text classifier: embedding, GRU cell, linear output head.
struct ModelBundle {
  Vocabulary vocab;
  Matrix embedding;  // V×d_e
  GruWeights gru;
  Matrix head;       // d_h×K
  Vector head_bias;  // K
  std::vector<std::string> class_names;

  int vocab_size() const { return vocab.size(); }
  int embed_dim() const { return static_cast<int>(embedding.cols()); }
  int hidden_dim() const { return static_cast<int>(gru.u_update.rows()); }
  int num_classes() const { return static_cast<int>(head_bias.size()); }

  /// Throws BadModelFile unless every dimension agrees, K ≥ 2, d_h ≥ 1 and
  /// all entries are finite.
  void validate() const;

  friend bool operator==(const ModelBundle& a, const ModelBundle& b);
};

/// Per-token hidden vectors h_1..h_l and intermediate predictions p_1..p_l.
struct HiddenTrace {
  std::vector<int> token_ids;
  std::vector<Vector> hidden;
  std::vector<Vector> probs;
  int final_label = 0;

  std::vector<int> intermediate_labels() const;
};

/// Index of the largest entry; ties go to the lower index.
int argmax(const Vector& v);

/// Standard GRU update:
///   z = σ(x·Wz + h·Uz + bz),  r = σ(x·Wr + h·Ur + br)
///   c = tanh(x·Wc + (r⊙h)·Uc + bc),  h' = z⊙h + (1−z)⊙c
Vector gru_step(const ModelBundle& model, const Vector& h_prev, int token_id);

/// Max-subtracted softmax. Throws NonFiniteLogits on NaN/inf input.
Vector softmax(const Vector& logits);

/// Output-head probabilities for one hidden vector.
Vector predict_probs(const ModelBundle& model, const Vector& hidden);

/// Runs the model from h_0 = 0, recording every h_t and p_t.
HiddenTrace forward_trace(const ModelBundle& model, std::span<const int> token_ids);
HiddenTrace forward_text(const ModelBundle& model, std::string_view text);

/// Uniform(−1/√d_h, 1/√d_h) initialization, seeded.
ModelBundle init_model(Vocabulary vocab, int embed_dim, int hidden_dim,
                       std::vector<std::string> class_names, std::uint64_t seed);

}  // namespace seer
