#include "seer/pca.hpp"

#include <cmath>
#include <string>

#include "seer/error.hpp"

namespace seer {

namespace {

void canonicalize_sign(Matrix& rows, Eigen::Index r) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < rows.cols(); ++i) {
    if (std::abs(rows(r, i)) > std::abs(rows(r, best))) best = i;
  }
  if (rows(r, best) < 0) rows.row(r) *= -1.0;
}

}  // namespace

bool operator==(const PcaModel& a, const PcaModel& b) {
  return a.mean.size() == b.mean.size() && a.mean == b.mean &&
         a.components.rows() == b.components.rows() &&
         a.components.cols() == b.components.cols() && a.components == b.components &&
         a.explained_variance.size() == b.explained_variance.size() &&
         a.explained_variance == b.explained_variance;
}

PcaModel fit_pca(const Matrix& data, int k) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (k < 1 || k > d) {
    throw Error(ErrorCode::BadDimension,
                "PCA dimension " + std::to_string(k) + " not in [1, " + std::to_string(d) + "]");
  }
  if (n < k) {
    throw Error(ErrorCode::BadDimension,
                "PCA needs at least " + std::to_string(k) + " rows, got " + std::to_string(n));
  }

  PcaModel pca;
  pca.mean = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - pca.mean.transpose();
  const double denom = static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
  const Matrix cov = (centered.transpose() * centered) / denom;

  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::BadDimension, "covariance eigendecomposition failed");
  }
  // Eigenvalues arrive ascending; take the last k in reverse.
  pca.components.resize(k, d);
  pca.explained_variance.resize(k);
  for (int i = 0; i < k; ++i) {
    const Eigen::Index src = d - 1 - i;
    pca.components.row(i) = solver.eigenvectors().col(src).transpose();
    pca.explained_variance[i] = std::max(0.0, solver.eigenvalues()[src]);
    canonicalize_sign(pca.components, i);
  }
  return pca;
}

Matrix pca_transform(const PcaModel& pca, const Matrix& rows) {
  if (rows.cols() != pca.input_dim()) {
    throw Error(ErrorCode::BadDimension, "expected " + std::to_string(pca.input_dim()) +
                                             " columns, got " + std::to_string(rows.cols()));
  }
  return (rows.rowwise() - pca.mean.transpose()) * pca.components.transpose();
}

Vector pca_transform(const PcaModel& pca, const Vector& x) {
  if (x.size() != pca.input_dim()) {
    throw Error(ErrorCode::BadDimension, "expected a vector of dimension " +
                                             std::to_string(pca.input_dim()));
  }
  return pca.components * (x - pca.mean);
}

Matrix pca_reconstruct(const PcaModel& pca, const Matrix& projected) {
  if (projected.cols() != pca.output_dim()) {
    throw Error(ErrorCode::BadDimension, "projected rows have the wrong dimension");
  }
  return (projected * pca.components).rowwise() + pca.mean.transpose();
}

}  // namespace seer
