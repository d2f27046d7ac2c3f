#include "pnc/channel.hpp"

#include "pnc/error.hpp"

#include <cmath>
#include <numbers>

namespace pnc {

Matrix psd_sqrt(const SymMatrix& q) {
  const auto d = q.dim();
  if (d == 0) {
    return Matrix(0, 0);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q.matrix());
  Vector lambda = eig.eigenvalues();
  const double tol = 1e-9 * std::max(1e-300, lambda.cwiseAbs().maxCoeff());
  if (lambda.minCoeff() < -tol) {
    throw NotPsd("psd_sqrt: matrix has a negative eigenvalue");
  }
  lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = eig.eigenvectors();
  return v * lambda.asDiagonal() * v.transpose();
}

PhaseTrajectory generate_phase_walk(const SymMatrix& q, int length, Rng& rng) {
  const int d = static_cast<int>(q.dim());
  const Matrix root = psd_sqrt(q);
  PhaseTrajectory out{RealGrid(d, length)};
  if (length == 0) {
    return out;
  }
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < d; ++i) {
    out.theta(i, 0) = uniform(rng);
  }
  Vector z(d);
  for (int k = 1; k < length; ++k) {
    for (int i = 0; i < d; ++i) {
      z(i) = normal(rng);
    }
    const Vector step = root * z;
    for (int i = 0; i < d; ++i) {
      out.theta(i, k) = out.theta(i, k - 1) + step(i);
    }
  }
  return out;
}

ComplexGrid apply_channel(const ComplexGrid& s, const PhaseTrajectory& theta,
                          const CovarianceSpec& cov, Rng& rng) {
  if (!s.same_shape(theta.theta) || s.channels() != cov.channels()) {
    throw DimensionMismatch("apply_channel: grid shapes disagree");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexGrid r(s.channels(), s.length());
  for (int i = 0; i < s.channels(); ++i) {
    const double sd = std::sqrt(cov.sigma2[static_cast<std::size_t>(i)]);
    for (int k = 0; k < s.length(); ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      r(i, k) = s(i, k) * std::polar(1.0, theta.theta(i, k)) + sd * cplx(re, im);
    }
  }
  return r;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  // splitmix64 over a mixed key
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return mix(mix(mix(master) ^ stream) ^ index);
}

}  // namespace pnc
