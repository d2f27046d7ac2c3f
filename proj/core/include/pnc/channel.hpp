#pragma once

#include "pnc/model.hpp"

namespace pnc {

/// Unwrapped phase-noise trajectory theta(i, k) in radians.
struct PhaseTrajectory {
  RealGrid theta;
};

/// Symmetric square root of a PSD matrix; eigenvalues below zero are clipped.
/// Throws NotPsd when the most negative eigenvalue is not round-off sized.
Matrix psd_sqrt(const SymMatrix& q);

/// theta_1 uniform on [0, 2 pi)^D, then Gaussian increments with covariance q.
PhaseTrajectory generate_phase_walk(const SymMatrix& q, int length, Rng& rng);

/// r(i, k) = s(i, k) exp(j theta(i, k)) + n(i, k), n complex Gaussian with
/// variance cov.sigma2[i] per real dimension.
ComplexGrid apply_channel(const ComplexGrid& s, const PhaseTrajectory& theta,
                          const CovarianceSpec& cov, Rng& rng);

/// Deterministic child seed for trial `index` of stream `stream`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

}  // namespace pnc
