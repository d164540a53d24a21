#include "seer/gmm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "seer/error.hpp"
#include "seer/kernels.hpp"
#include "seer/random.hpp"

namespace seer {

namespace {

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

// k-means++ seeding followed by Lloyd iterations; returns one label per row.
std::vector<int> kmeans_labels(const Matrix& data, int n, std::uint64_t seed, int iterations) {
  const Eigen::Index rows = data.rows();
  Rng rng(seed);
  Matrix centers(n, data.cols());
  std::vector<bool> taken(static_cast<std::size_t>(rows), false);

  auto first = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(rows)));
  centers.row(0) = data.row(first);
  taken[static_cast<std::size_t>(first)] = true;
  Vector nearest(rows);
  for (Eigen::Index i = 0; i < rows; ++i) nearest[i] = squared_distance(data, i, centers, 0);

  for (int c = 1; c < n; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) total += nearest[i];
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < rows; ++i) {
        acc += nearest[i];
        if (acc > target && nearest[i] > 0.0) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {
        for (Eigen::Index i = rows; i-- > 0;) {
          if (nearest[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    }
    if (pick < 0) {
      // Fewer distinct points than components: reuse the lowest unused row.
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (!taken[static_cast<std::size_t>(i)]) {
          pick = i;
          break;
        }
      }
    }
    taken[static_cast<std::size_t>(pick)] = true;
    centers.row(c) = data.row(pick);
    for (Eigen::Index i = 0; i < rows; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(data, i, centers, c));
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(rows), -1);
  for (int iter = 0; iter < std::max(1, iterations); ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < rows; ++i) {
      int best = 0;
      double best_d = squared_distance(data, i, centers, 0);
      for (int c = 1; c < n; ++c) {
        const double d = squared_distance(data, i, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[static_cast<std::size_t>(i)] != best) {
        labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed) break;
    Matrix sums = Matrix::Zero(n, data.cols());
    std::vector<long> counts(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const int c = labels[static_cast<std::size_t>(i)];
      sums.row(c) += data.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < n; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }
  }
  return labels;
}

GmmModel package(kernels::MixtureStats stats, std::uint64_t seed) {
  GmmModel m;
  m.weights = std::move(stats.weights);
  m.means = std::move(stats.means);
  m.covariances = std::move(stats.covariances);
  m.seed = seed;
  return m;
}

// Row-wise log-sum-exp; the per-row maximum keeps it finite.
Vector log_sum_exp_rows(const Matrix& joint) {
  Vector out(joint.rows());
  for (Eigen::Index i = 0; i < joint.rows(); ++i) {
    const double top = joint.row(i).maxCoeff();
    out[i] = top + std::log((joint.row(i).array() - top).exp().sum());
  }
  return out;
}

double ordered_mean(const Vector& v) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) total += v[i];
  return total / static_cast<double>(v.size());
}

}  // namespace

bool operator==(const GmmModel& a, const GmmModel& b) {
  if (a.seed != b.seed || a.weights.size() != b.weights.size() || a.weights != b.weights ||
      a.means.rows() != b.means.rows() || a.means.cols() != b.means.cols() ||
      a.means != b.means || a.covariances.size() != b.covariances.size()) {
    return false;
  }
  for (std::size_t j = 0; j < a.covariances.size(); ++j) {
    if (a.covariances[j].rows() != b.covariances[j].rows() || a.covariances[j] != b.covariances[j]) {
      return false;
    }
  }
  return true;
}

GmmScorer::GmmScorer(const GmmModel& gmm) : means_(gmm.means) {
  const int n = gmm.n_components();
  const Eigen::Index k = gmm.means.cols();
  if (gmm.means.rows() != n || static_cast<int>(gmm.covariances.size()) != n) {
    throw Error(ErrorCode::BadDimension, "mixture parameters disagree on the component count");
  }
  log_norm_.resize(n);
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  for (int j = 0; j < n; ++j) {
    const Matrix& cov = gmm.covariances[static_cast<std::size_t>(j)];
    if (cov.rows() != k || cov.cols() != k) {
      throw Error(ErrorCode::BadDimension, "covariance " + std::to_string(j) + " has the wrong shape");
    }
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::BadDimension, "covariance " + std::to_string(j) + " is not positive definite");
    }
    Matrix lower = llt.matrixL();
    Matrix inv = lower.triangularView<Eigen::Lower>().solve(Matrix::Identity(k, k));
    double log_det = 0.0;
    for (Eigen::Index a = 0; a < k; ++a) log_det += 2.0 * std::log(lower(a, a));
    log_norm_[j] = std::log(gmm.weights[j]) - 0.5 * (static_cast<double>(k) * log_two_pi + log_det);
    lower_.push_back(std::move(lower));
    inv_lower_.push_back(std::move(inv));
  }
}

Vector GmmScorer::log_joint(const Vector& x) const {
  if (x.size() != dim()) {
    throw Error(ErrorCode::BadDimension, "expected a vector of dimension " + std::to_string(dim()));
  }
  Vector out(n_components());
  for (int j = 0; j < n_components(); ++j) {
    const Vector whitened = inv_lower_[static_cast<std::size_t>(j)] * (x - means_.row(j).transpose());
    out[j] = log_norm_[j] - 0.5 * whitened.squaredNorm();
  }
  return out;
}

int GmmScorer::assign(const Vector& x) const {
  const Vector scores = log_joint(x);
  int best = 0;
  for (Eigen::Index j = 1; j < scores.size(); ++j) {
    if (scores[j] > scores[best]) best = static_cast<int>(j);
  }
  return best;
}

GmmFit fit_gmm_trace(const Matrix& data, int n, std::uint64_t seed, const GmmOptions& options) {
  if (n < 1 || n > data.rows()) {
    throw Error(ErrorCode::BadComponentCount, "component count " + std::to_string(n) +
                                                  " not in [1, " + std::to_string(data.rows()) + "]");
  }
  if (data.cols() < 1) throw Error(ErrorCode::BadDimension, "data has no columns");

  const std::vector<int> labels = kmeans_labels(data, n, seed, options.kmeans_iter);
  Matrix resp = Matrix::Zero(data.rows(), n);
  for (Eigen::Index i = 0; i < data.rows(); ++i) resp(i, labels[static_cast<std::size_t>(i)]) = 1.0;

  GmmFit fit;
  fit.model = package(kernels::parallel::maximization(data, resp, options.reg_covar), seed);
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const GmmScorer scorer(fit.model);
    const Matrix joint = kernels::parallel::log_joint(scorer, data);
    const Vector norm = log_sum_exp_rows(joint);
    const double ll = ordered_mean(norm);
    const bool small_gain = !fit.log_likelihood.empty() && ll - fit.log_likelihood.back() < options.tol;
    fit.log_likelihood.push_back(ll);
    if (small_gain) {
      fit.converged = true;
      break;
    }
    if (iter + 1 == options.max_iter) break;
    resp = (joint.colwise() - norm).array().exp().matrix();
    fit.model = package(kernels::parallel::maximization(data, resp, options.reg_covar), seed);
  }
  return fit;
}

GmmModel fit_gmm(const Matrix& data, int n, std::uint64_t seed, const GmmOptions& options) {
  return fit_gmm_trace(data, n, seed, options).model;
}

int gmm_assign(const GmmModel& gmm, const Vector& x) { return GmmScorer(gmm).assign(x); }

double gmm_mean_log_likelihood(const GmmModel& gmm, const Matrix& data) {
  const GmmScorer scorer(gmm);
  return ordered_mean(log_sum_exp_rows(kernels::parallel::log_joint(scorer, data)));
}

}  // namespace seer
