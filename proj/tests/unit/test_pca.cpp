#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "seer/error.hpp"
#include "seer/pca.hpp"
#include "seer/random.hpp"

using namespace seer;

namespace {

Matrix sample_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix x(rows, cols);
  Vector scale(cols);
  for (Eigen::Index j = 0; j < cols; ++j) scale(j) = 0.3 + 2.0 * static_cast<double>(j + 1) / static_cast<double>(cols);
  Matrix mix(cols, cols);
  for (Eigen::Index i = 0; i < cols; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) mix(i, j) = rng.uniform(-0.3, 0.3) + (i == j ? 1.0 : 0.0);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = rng.normal() * scale(j) + 0.5;
  return x * mix;
}

Matrix covariance(const Matrix& x) {
  const Matrix centered = x.rowwise() - x.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(x.rows() - 1);
}

void check_orthonormal(const PcaModel& p) {
  const Matrix gram = p.components * p.components.transpose();
  CHECK((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-8);
  for (int i = 1; i < p.output_dim(); ++i) CHECK(p.explained_variance(i) <= p.explained_variance(i - 1));
  CHECK((p.explained_variance.array() >= 0).all());
}

}  // namespace

TEST_CASE("points on y = 2x give one component along (1,2)") {
  Matrix x(6, 2);
  for (int i = 0; i < 6; ++i) x.row(i) << i - 2.5, 2.0 * (i - 2.5);
  const PcaModel p = fit_pca(x, 1);
  CHECK(std::abs(p.components(0, 0) - 1.0 / std::sqrt(5.0)) <= 1e-12);
  CHECK(std::abs(p.components(0, 1) - 2.0 / std::sqrt(5.0)) <= 1e-12);
  const PcaModel full = fit_pca(x, 2);
  CHECK(full.explained_variance(0) / full.explained_variance.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("components match a Jacobi eigen oracle") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = static_cast<Eigen::Index>(2 + rng.below(15));
    const auto n = static_cast<Eigen::Index>(d + 5 + static_cast<Eigen::Index>(rng.below(180)));
    const Matrix x = sample_matrix(rng, n, d);
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    const PcaModel p = fit_pca(x, k);
    check_orthonormal(p);
    const auto oracle = testkit::jacobi_eigen(covariance(x));
    for (int c = 0; c < k; ++c) {
      Vector v = oracle.vectors.col(c);
      Eigen::Index big = 0;
      v.cwiseAbs().maxCoeff(&big);
      if (v(big) < 0) v = -v;
      CHECK((p.components.row(c).transpose() - v).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK(std::abs(p.explained_variance(c) - oracle.values[static_cast<std::size_t>(c)]) <= 1e-8);
    }
    const Matrix centered = x.rowwise() - x.colwise().mean();
    const Matrix expected = centered * p.components.transpose();
    CHECK((pca_transform(p, x) - expected).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((p.mean - x.colwise().mean().transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("reconstruction error equals the discarded variance") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = static_cast<Eigen::Index>(2 + rng.below(9));
    const Matrix x = sample_matrix(rng, 50, d);
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    const PcaModel p = fit_pca(x, k);
    const Matrix recon = pca_reconstruct(p, pca_transform(p, x));
    const double err = (x - recon).squaredNorm() / static_cast<double>(x.rows() - 1);
    const auto oracle = testkit::jacobi_eigen(covariance(x));
    double discarded = 0.0;
    for (std::size_t j = static_cast<std::size_t>(k); j < oracle.values.size(); ++j) discarded += oracle.values[j];
    CHECK(std::abs(err - discarded) <= 1e-8);
  }
}

TEST_CASE("full-rank projection is an isometry and round-trips") {
  Rng rng(9);
  const Matrix x = sample_matrix(rng, 40, 6);
  const PcaModel p = fit_pca(x, 6);
  const Matrix y = pca_transform(p, x);
  for (int i = 0; i < 40; ++i)
    for (int j = i + 1; j < 40; ++j)
      CHECK(std::abs((x.row(i) - x.row(j)).norm() - (y.row(i) - y.row(j)).norm()) <= 1e-8);
  CHECK((pca_reconstruct(p, y) - x).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("transform centers and is linear") {
  Rng rng(10);
  const Matrix x = sample_matrix(rng, 30, 5);
  const PcaModel p = fit_pca(x, 3);
  CHECK(pca_transform(p, p.mean).cwiseAbs().maxCoeff() <= 1e-12);
  for (int trial = 0; trial < 50; ++trial) {
    Vector a(5), b(5);
    for (int i = 0; i < 5; ++i) {
      a(i) = rng.uniform(-3, 3);
      b(i) = rng.uniform(-3, 3);
    }
    const double s = rng.uniform(-2, 2);
    // (x − mean)·Cᵀ is affine: T(a + s·b) = T(a) + s·(T(b) − T(0))
    const Vector zero = Vector::Zero(5);
    const Vector lhs = pca_transform(p, Vector(a + s * b));
    const Vector rhs = pca_transform(p, a) + s * (pca_transform(p, b) - pca_transform(p, zero));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("rank-deficient data pads with orthonormal zero-variance directions") {
  Matrix x(10, 4);
  for (int i = 0; i < 10; ++i) x.row(i) << i, 2 * i, -i, 0.5 * i;
  const PcaModel p = fit_pca(x, 3);
  check_orthonormal(p);
  CHECK(p.explained_variance(0) > 1.0);
  CHECK(p.explained_variance(1) <= 1e-10);
  CHECK(p.explained_variance(2) <= 1e-10);
}

TEST_CASE("sign canonicalization and determinism") {
  Rng rng(11);
  const Matrix x = sample_matrix(rng, 60, 7);
  const PcaModel p = fit_pca(x, 4);
  for (int c = 0; c < 4; ++c) {
    Eigen::Index big = 0;
    p.components.row(c).cwiseAbs().maxCoeff(&big);
    CHECK(p.components(c, big) > 0);
  }
  CHECK(fit_pca(x, 4) == p);
  CHECK(fit_pca(-x, 4).explained_variance == p.explained_variance);
}

TEST_CASE("dimension errors") {
  Matrix x = Matrix::Random(5, 3);
  for (int k : {0, 4}) {
    try {
      fit_pca(x, k);
      FAIL("expected BadDimension");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadDimension);
    }
  }
  const PcaModel p = fit_pca(x, 2);
  CHECK_THROWS_AS(pca_transform(p, Matrix(Matrix::Zero(2, 4))), Error);
  CHECK_THROWS_AS(pca_transform(p, Vector(Vector::Zero(2))), Error);
}
