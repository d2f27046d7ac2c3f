#include "pnc/numerics.hpp"

#include "pnc/error.hpp"

#include <cmath>
#include <numbers>

namespace pnc {

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw InvalidMatrix("SymMatrix: matrix is not square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (((m - m.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale) {
    throw InvalidMatrix("SymMatrix: matrix is not symmetric");
  }
  if (m.rows() > 0 && m.diagonal().minCoeff() < 0.0) {
    throw InvalidMatrix("SymMatrix: negative diagonal entry");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index dim) { return SymMatrix(Matrix::Identity(dim, dim)); }

SymMatrix SymMatrix::diagonal(const Vector& diag) { return SymMatrix(Matrix(diag.asDiagonal())); }

SymMatrix SymMatrix::zero(Eigen::Index dim) { return SymMatrix(Matrix::Zero(dim, dim)); }

SymMatrix SymMatrix::diagonal_part() const { return diagonal(m_.diagonal()); }

Matrix spd_solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    throw DimensionMismatch("spd_solve: dimension mismatch");
  }
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) {
    return llt.solve(b);
  }
  const auto dim = static_cast<double>(a.rows());
  Matrix jittered = a;
  jittered.diagonal().array() += 1e-12 * a.trace() / dim;
  llt.compute(jittered);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("spd_solve: Cholesky factorization failed after jitter");
  }
  return llt.solve(b);
}

Matrix spd_solve(const SymMatrix& a, const Matrix& b) { return spd_solve(a.matrix(), b); }

double log_bessel_i0_leading(double x) { return x - 0.5 * std::log(2.0 * std::numbers::pi * x); }

double log_bessel_i0(double x) {
  constexpr double crossover = 20.0;
  if (x <= crossover) {
    // sum_m (x^2/4)^m / (m!)^2
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 500; ++m) {
      term *= q / (static_cast<double>(m) * static_cast<double>(m));
      sum += term;
      if (term < 1e-17 * sum) {
        break;
      }
    }
    return std::log(sum);
  }
  // e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd / (8.0 * k * x);
    if (next >= term || next < 1e-18 * sum) {
      break;
    }
    term = next;
    sum += term;
  }
  return log_bessel_i0_leading(x) + std::log(sum);
}

double gaussian_logpdf(const Vector& x, const Vector& mean, const SymMatrix& cov) {
  if (x.size() != mean.size() || x.size() != cov.dim()) {
    throw DimensionMismatch("gaussian_logpdf: dimension mismatch");
  }
  Eigen::LLT<Matrix> llt(cov.matrix());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("gaussian_logpdf: covariance is not positive definite");
  }
  const Vector diff = x - mean;
  const Vector z = llt.matrixL().solve(diff);
  const Matrix& l = llt.matrixLLT();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    log_det += 2.0 * std::log(l(i, i));
  }
  const auto d = static_cast<double>(x.size());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det + z.squaredNorm());
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);
  if (w <= -std::numbers::pi) {
    w += two_pi;
  }
  return w;
}

}  // namespace pnc
