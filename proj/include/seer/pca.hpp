#pragma once

#include <Eigen/Dense>

namespace seer {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Principal directions of the training hidden states.
struct PcaModel {
  Vector mean;                 // d_h
  Matrix components;           // k×d_h, orthonormal rows
  Vector explained_variance;   // k, non-increasing

  int output_dim() const { return static_cast<int>(components.rows()); }
  int input_dim() const { return static_cast<int>(mean.size()); }

  friend bool operator==(const PcaModel& a, const PcaModel& b);
};

/// Fits the top-k principal components of the rows of `data`.
///
/// Components come from the eigendecomposition of the sample covariance
/// (divisor N−1). Each row is sign-canonicalized so that its largest-magnitude
/// entry is positive (first such entry on ties). When rank(data) < k the
/// trailing rows span part of the orthonormal complement and carry zero
/// explained variance. Throws BadDimension if k < 1, k > d_h or rows < k.
PcaModel fit_pca(const Matrix& data, int k);

/// (x − mean)·Cᵀ for every row x. Throws BadDimension on column mismatch.
Matrix pca_transform(const PcaModel& pca, const Matrix& rows);
Vector pca_transform(const PcaModel& pca, const Vector& x);

/// mean + y·C for every row y of a projected matrix.
Matrix pca_reconstruct(const PcaModel& pca, const Matrix& projected);

}  // namespace seer
