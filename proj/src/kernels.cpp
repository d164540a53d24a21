#include "seer/kernels.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>

#include "seer/error.hpp"

namespace seer::kernels {

namespace {

std::vector<std::size_t> prefix_offsets(std::span<const std::vector<int>> corpus) {
  std::vector<std::size_t> offsets(corpus.size() + 1, 0);
  for (std::size_t i = 0; i < corpus.size(); ++i) offsets[i + 1] = offsets[i] + corpus[i].size();
  return offsets;
}

void check_component_count(const Matrix& resp, const Matrix& data) {
  if (resp.rows() != data.rows()) {
    throw Error(ErrorCode::BadDimension, "responsibility rows do not match data rows");
  }
}

Error with_instance(std::size_t index, const Error& e) {
  return Error(e.code(), "instance " + std::to_string(index) + ": " + e.detail());
}

}  // namespace

namespace parallel {

Matrix log_joint(const GmmScorer& scorer, const Matrix& data) {
  if (data.cols() != scorer.dim()) throw Error(ErrorCode::BadDimension, "data has the wrong dimension");
  const int n = scorer.n_components();
  Matrix out(data.rows(), n);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const Matrix centered = data.rowwise() - scorer.mean_rows().row(j);
    const Matrix whitened = centered * scorer.inverse_cholesky(j).transpose();
    out.col(j) = (scorer.log_norm(j) - 0.5 * whitened.rowwise().squaredNorm().array()).matrix();
  }
  return out;
}

MixtureStats maximization(const Matrix& data, const Matrix& resp, double reg_covar) {
  check_component_count(resp, data);
  const Eigen::Index k = data.cols();
  const int n = static_cast<int>(resp.cols());
  MixtureStats stats;
  stats.weights.resize(n);
  stats.means.resize(n, k);
  stats.covariances.assign(static_cast<std::size_t>(n), Matrix());
  const double floor = 10.0 * std::numeric_limits<double>::epsilon();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const Vector w = resp.col(j);
    const double mass = w.sum() + floor;
    const Vector mean = (data.transpose() * w) / mass;
    const Matrix centered = data.rowwise() - mean.transpose();
    const Matrix weighted = centered.array().colwise() * w.array();
    Matrix cov = (weighted.transpose() * centered) / mass;
    const Matrix symmetric = 0.5 * (cov + cov.transpose());
    cov = symmetric;
    cov.diagonal().array() += reg_covar;
    stats.weights[j] = mass;
    stats.means.row(j) = mean.transpose();
    stats.covariances[static_cast<std::size_t>(j)] = std::move(cov);
  }
  stats.weights /= stats.weights.sum();
  return stats;
}

HiddenRows harvest(const ModelBundle& model, std::span<const std::vector<int>> corpus) {
  HiddenRows out;
  out.offsets = prefix_offsets(corpus);
  out.rows.resize(static_cast<Eigen::Index>(out.offsets.back()), model.hidden_dim());
  const long count = static_cast<long>(corpus.size());
  std::vector<std::exception_ptr> errors(corpus.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      const HiddenTrace trace = forward_trace(model, corpus[idx]);
      for (std::size_t t = 0; t < trace.hidden.size(); ++t) {
        out.rows.row(static_cast<Eigen::Index>(out.offsets[idx] + t)) = trace.hidden[t].transpose();
      }
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw with_instance(i, e);
    }
  }
  return out;
}

std::vector<int> assign_rows(const GmmScorer& scorer, const Matrix& data) {
  if (data.cols() != scorer.dim()) throw Error(ErrorCode::BadDimension, "data has the wrong dimension");
  std::vector<int> out(static_cast<std::size_t>(data.rows()));
  const long rows = static_cast<long>(data.rows());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < rows; ++i) {
    out[static_cast<std::size_t>(i)] = scorer.assign(data.row(i).transpose());
  }
  return out;
}

}  // namespace parallel

namespace serial {

Matrix log_joint(const GmmScorer& scorer, const Matrix& data) {
  if (data.cols() != scorer.dim()) throw Error(ErrorCode::BadDimension, "data has the wrong dimension");
  const Eigen::Index k = data.cols();
  const int n = scorer.n_components();
  Matrix out(data.rows(), n);
  std::vector<double> y(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (int j = 0; j < n; ++j) {
      const Matrix& lower = scorer.cholesky(j);
      double sq = 0.0;
      // Forward substitution: lower · y = x − m_j.
      for (Eigen::Index a = 0; a < k; ++a) {
        double v = data(i, a) - scorer.mean_rows()(j, a);
        for (Eigen::Index b = 0; b < a; ++b) v -= lower(a, b) * y[static_cast<std::size_t>(b)];
        v /= lower(a, a);
        y[static_cast<std::size_t>(a)] = v;
        sq += v * v;
      }
      out(i, j) = scorer.log_norm(j) - 0.5 * sq;
    }
  }
  return out;
}

MixtureStats maximization(const Matrix& data, const Matrix& resp, double reg_covar) {
  check_component_count(resp, data);
  const Eigen::Index rows = data.rows();
  const Eigen::Index k = data.cols();
  const Eigen::Index n = resp.cols();
  const double floor = 10.0 * std::numeric_limits<double>::epsilon();
  MixtureStats stats;
  stats.weights = Vector::Zero(n);
  stats.means = Matrix::Zero(n, k);
  for (Eigen::Index j = 0; j < n; ++j) {
    double mass = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) mass += resp(i, j);
    mass += floor;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index a = 0; a < k; ++a) stats.means(j, a) += resp(i, j) * data(i, a);
    stats.means.row(j) /= mass;
    Matrix cov = Matrix::Zero(k, k);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = a; b < k; ++b)
          cov(a, b) += resp(i, j) * (data(i, a) - stats.means(j, a)) * (data(i, b) - stats.means(j, b));
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < a; ++b) cov(a, b) = cov(b, a);
    cov /= mass;
    for (Eigen::Index a = 0; a < k; ++a) cov(a, a) += reg_covar;
    stats.weights[j] = mass;
    stats.covariances.push_back(std::move(cov));
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) total += stats.weights[j];
  stats.weights /= total;
  return stats;
}

HiddenRows harvest(const ModelBundle& model, std::span<const std::vector<int>> corpus) {
  HiddenRows out;
  out.offsets = prefix_offsets(corpus);
  out.rows.resize(static_cast<Eigen::Index>(out.offsets.back()), model.hidden_dim());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    Vector h = Vector::Zero(model.hidden_dim());
    try {
      for (std::size_t t = 0; t < corpus[i].size(); ++t) {
        h = gru_step(model, h, corpus[i][t]);
        out.rows.row(static_cast<Eigen::Index>(out.offsets[i] + t)) = h.transpose();
      }
      if (corpus[i].empty()) throw Error(ErrorCode::EmptyInput, "token sequence is empty");
    } catch (const Error& e) {
      throw with_instance(i, e);
    }
  }
  return out;
}

std::vector<int> assign_rows(const GmmScorer& scorer, const Matrix& data) {
  const Matrix joint = log_joint(scorer, data);
  std::vector<int> out(static_cast<std::size_t>(data.rows()));
  for (Eigen::Index i = 0; i < joint.rows(); ++i) {
    int best = 0;
    for (Eigen::Index j = 1; j < joint.cols(); ++j) {
      if (joint(i, j) > joint(i, best)) best = static_cast<int>(j);
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

}  // namespace serial

}  // namespace seer::kernels
