#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "seer/gmm.hpp"
#include "seer/model.hpp"

namespace seer::kernels {

/// Mixture parameters produced by one M-step, before packaging into a model.
struct MixtureStats {
  Vector weights;
  Matrix means;
  std::vector<Matrix> covariances;
};

/// All hidden vectors of a corpus stacked row-wise; rows of instance i are
/// [offsets[i], offsets[i+1]).
struct HiddenRows {
  Matrix rows;
  std::vector<std::size_t> offsets;
};

// The parallel kernels are what the pipeline runs. Each thread owns a disjoint
// output slice and every reduction runs in a fixed order, so results do not
// depend on the thread count.
namespace parallel {

/// N×n matrix of log π_j + log N(x_i; m_j, Σ_j).
Matrix log_joint(const GmmScorer& scorer, const Matrix& data);
MixtureStats maximization(const Matrix& data, const Matrix& resp, double reg_covar);
HiddenRows harvest(const ModelBundle& model, std::span<const std::vector<int>> corpus);
std::vector<int> assign_rows(const GmmScorer& scorer, const Matrix& data);

}  // namespace parallel

// Straight-line scalar versions, kept as references for tests and benchmarks.
namespace serial {

Matrix log_joint(const GmmScorer& scorer, const Matrix& data);
MixtureStats maximization(const Matrix& data, const Matrix& resp, double reg_covar);
HiddenRows harvest(const ModelBundle& model, std::span<const std::vector<int>> corpus);
std::vector<int> assign_rows(const GmmScorer& scorer, const Matrix& data);

}  // namespace serial

}  // namespace seer::kernels
