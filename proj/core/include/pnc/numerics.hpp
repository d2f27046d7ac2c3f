#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace pnc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Real symmetric matrix. Symmetry is checked on construction (1e-12
/// relative) and then enforced exactly; diagonal entries must be >= 0.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Eigen::Index dim);
  static SymMatrix diagonal(const Vector& diag);
  static SymMatrix zero(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double trace() const { return m_.trace(); }

  /// Copy with off-diagonal entries set to zero.
  SymMatrix diagonal_part() const;

 private:
  Matrix m_;
};

/// Solves A X = B for symmetric positive definite A via Cholesky. If the
/// factorization fails, 1e-12 * trace(A) / dim is added to the diagonal and
/// the factorization retried once. Throws NotPositiveDefinite otherwise.
Matrix spd_solve(const SymMatrix& a, const Matrix& b);
Matrix spd_solve(const Matrix& a, const Matrix& b);

/// ln I0(x) for x >= 0. Power series below 20, Hankel asymptotic expansion
/// (summed until its terms stop shrinking) above.
double log_bessel_i0(double x);

/// Leading-order asymptote x - ln(2 pi x) / 2 of ln I0(x).
double log_bessel_i0_leading(double x);

/// Multivariate real Gaussian log density.
double gaussian_logpdf(const Vector& x, const Vector& mean, const SymMatrix& cov);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Fixed-size sequence of square matrices stored contiguously.
class MatrixSequence {
 public:
  MatrixSequence() = default;
  MatrixSequence(std::size_t count, Eigen::Index dim)
      : count_(count), dim_(dim), data_(count * static_cast<std::size_t>(dim * dim), 0.0) {}

  std::size_t size() const { return count_; }
  Eigen::Index dim() const { return dim_; }

  Eigen::Map<Matrix> operator[](std::size_t k) {
    return Eigen::Map<Matrix>(data_.data() + k * static_cast<std::size_t>(dim_ * dim_), dim_, dim_);
  }
  Eigen::Map<const Matrix> operator[](std::size_t k) const {
    return Eigen::Map<const Matrix>(data_.data() + k * static_cast<std::size_t>(dim_ * dim_), dim_,
                                    dim_);
  }

 private:
  std::size_t count_ = 0;
  Eigen::Index dim_ = 0;
  std::vector<double> data_;
};

}  // namespace pnc
