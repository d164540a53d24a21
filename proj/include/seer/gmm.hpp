#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace seer {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Full-covariance Gaussian mixture over PCA-projected hidden states.
struct GmmModel {
  Vector weights;                    // n, positive, sums to 1
  Matrix means;                      // n×k
  std::vector<Matrix> covariances;   // n of k×k, SPD
  std::uint64_t seed = 0;

  int n_components() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(means.cols()); }

  friend bool operator==(const GmmModel& a, const GmmModel& b);
};

struct GmmOptions {
  double tol = 1e-3;          // stop when the mean log-likelihood gains less than this
  int max_iter = 100;
  double reg_covar = 1e-6;    // added to every covariance diagonal
  int kmeans_iter = 20;       // Lloyd refinements after k-means++ seeding
};

struct GmmFit {
  GmmModel model;
  std::vector<double> log_likelihood;  // mean per-sample value, one per E-step
  bool converged = false;
};

/// Precomputed Cholesky data for fast log π_j + log N(x; m_j, Σ_j).
class GmmScorer {
 public:
  explicit GmmScorer(const GmmModel& gmm);

  int n_components() const { return static_cast<int>(log_norm_.size()); }
  int dim() const { return static_cast<int>(means_.cols()); }

  Vector log_joint(const Vector& x) const;
  /// argmax of log_joint, lowest id on ties. Throws BadDimension on mismatch.
  int assign(const Vector& x) const;

  const Matrix& mean_rows() const { return means_; }
  const Matrix& cholesky(int j) const { return lower_[static_cast<std::size_t>(j)]; }
  const Matrix& inverse_cholesky(int j) const { return inv_lower_[static_cast<std::size_t>(j)]; }
  /// log π_j − ½(k log 2π + log det Σ_j)
  double log_norm(int j) const { return log_norm_[j]; }

 private:
  Matrix means_;
  std::vector<Matrix> lower_;
  std::vector<Matrix> inv_lower_;
  Vector log_norm_;
};

/// Expectation-maximization with full covariances. Initialization is k-means++
/// seeding (driven by `seed`) followed by Lloyd refinement; EM stops when the
/// mean log-likelihood gain drops below tol or after max_iter E-steps.
/// Throws BadComponentCount unless 1 ≤ n ≤ rows.
GmmFit fit_gmm_trace(const Matrix& data, int n, std::uint64_t seed, const GmmOptions& options = {});
GmmModel fit_gmm(const Matrix& data, int n, std::uint64_t seed, const GmmOptions& options = {});

int gmm_assign(const GmmModel& gmm, const Vector& x);

/// Mean per-sample log-likelihood of `data` under the mixture.
double gmm_mean_log_likelihood(const GmmModel& gmm, const Matrix& data);

}  // namespace seer
