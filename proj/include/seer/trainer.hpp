#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "seer/dataset.hpp"
#include "seer/model.hpp"

namespace seer {

struct TrainConfig {
  int embed_dim = 16;
  int hidden_dim = 32;
  int epochs = 20;
  double learning_rate = 0.05;
  std::uint64_t seed = 7;
  double clip_norm = 5.0;
  std::size_t max_vocab_words = 5000;
};

struct TrainReport {
  ModelBundle model;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;  // NaN when the dataset has no test rows
  std::vector<double> epoch_loss;
};

/// Gradient buffers with the same shapes as the model's parameters.
struct Gradients {
  Matrix embedding;
  GruWeights gru;
  Matrix head;
  Vector head_bias;

  static Gradients zeros_like(const ModelBundle& model);
  void set_zero();
  double squared_norm() const;
};

/// Visits every (parameter, gradient) pair in a fixed order.
void for_each_parameter(ModelBundle& model, Gradients& grad,
                        const std::function<void(double& param, double& grad)>& fn);

/// Cross-entropy of the final prediction. Adds d(loss)/d(params) into `grad`
/// via backpropagation through time and returns the loss.
double loss_and_gradient(const ModelBundle& model, std::span<const int> token_ids, int label,
                         Gradients& grad);
double sequence_loss(const ModelBundle& model, std::span<const int> token_ids, int label);

/// Per-sample SGD over the train split, shuffled each epoch with the seed;
/// gradients are clipped to a global norm of `clip_norm`. Labels must lie in
/// [0, class_names.size()); class_names defaults to "0".."K-1" from the data.
TrainReport train(const TrainConfig& config, const std::vector<LabeledText>& dataset,
                  std::vector<std::string> class_names = {});

double accuracy(const ModelBundle& model, const std::vector<LabeledText>& rows);

}  // namespace seer
