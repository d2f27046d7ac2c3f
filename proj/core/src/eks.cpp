#include "pnc/eks.hpp"

#include "pnc/error.hpp"

#include <cmath>

namespace pnc {
namespace {

void symmetrize(Eigen::Map<Matrix> m) {
  const Matrix t = 0.5 * (m + m.transpose());
  m = t;
}

}  // namespace

ForwardPass ekf_forward(const ComplexGrid& r, const SoftSymbolStats& stats,
                        const CovarianceSpec& cov, const EksOptions& options) {
  const int d = r.channels();
  const int n = r.length();
  if (!stats.mean.same_shape(r) || !stats.eff_var.same_shape(r) || cov.channels() != d) {
    throw DimensionMismatch("ekf_forward: dimensions of r, stats and cov disagree");
  }
  ForwardPass out{RealGrid(d, n), MatrixSequence(static_cast<std::size_t>(n), d),
                  MatrixSequence(static_cast<std::size_t>(n), d)};
  if (n == 0) {
    return out;
  }
  const Matrix& q = cov.q.matrix();

  auto m0 = out.cov[0];
  m0.setZero();
  for (int i = 0; i < d; ++i) {
    const cplx mean = stats.mean(i, 0);
    // a uniform PMF leaves round-off in the soft mean, so compare against Es
    if (std::norm(mean) <= 1e-20 * options.symbol_energy) {
      out.mean(i, 0) = 0.0;
      m0(i, i) = options.uninformative_variance;
      continue;
    }
    out.mean(i, 0) = std::arg(r(i, 0) * std::conj(mean));
    const double var = options.init == InitialVariance::effective
                           ? stats.eff_var(i, 0)
                           : cov.sigma2[static_cast<std::size_t>(i)];
    m0(i, i) = var / options.symbol_energy;
  }

  Vector w(d);
  Vector h(d);
  for (int k = 1; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    auto pred = out.predicted[ku];
    pred = out.cov[ku - 1] + q;

    for (int i = 0; i < d; ++i) {
      const cplx mean = stats.mean(i, k);
      const double info = std::norm(mean) / stats.eff_var(i, k);
      w(i) = std::sqrt(info);
      if (info == 0.0) {
        h(i) = 0.0;
        continue;
      }
      const double prev = out.mean(i, k - 1);
      const cplx z = r(i, k) * std::conj(mean);
      double anchor = prev;
      if (pred(i, i) > options.relinearize_variance ||
          (stats.is_known(i, k) && info * pred(i, i) > options.relinearize_info_ratio)) {
        anchor = prev + wrap_angle(std::arg(z) - prev);
      }
      // Pseudo-measurement of theta_k linearized at `anchor`, relative to prev.
      const double offset = anchor - prev + (z * std::polar(1.0, -anchor)).imag() / std::norm(mean);
      h(i) = info * offset;
    }

    // M^f_k = (I + P V)^{-1} P written as P - P W (I + W P W)^{-1} W P, W = V^{1/2}.
    const Matrix wp = w.asDiagonal() * pred;
    Matrix s = wp * w.asDiagonal();
    s.diagonal().array() += 1.0;
    const Matrix gain = spd_solve(s, wp);
    auto mk = out.cov[ku];
    mk = pred - wp.transpose() * gain;
    symmetrize(mk);

    const Vector step = mk * h;
    for (int i = 0; i < d; ++i) {
      out.mean(i, k) = out.mean(i, k - 1) + step(i);
    }
  }
  return out;
}

PhasePosterior rtss_backward(const ForwardPass& forward, const CovarianceSpec& cov) {
  const int d = forward.mean.channels();
  const int n = forward.mean.length();
  if (cov.channels() != d) {
    throw DimensionMismatch("rtss_backward: covariance dimension mismatch");
  }
  PhasePosterior out{RealGrid(d, n), MatrixSequence(static_cast<std::size_t>(n), d)};
  if (n == 0) {
    return out;
  }
  const auto last = static_cast<std::size_t>(n - 1);
  out.cov[last] = forward.cov[last];
  for (int i = 0; i < d; ++i) {
    out.mean(i, n - 1) = forward.mean(i, n - 1);
  }

  Vector diff(d);
  for (int k = n - 2; k >= 0; --k) {
    const auto ku = static_cast<std::size_t>(k);
    const Matrix pred = forward.predicted[ku + 1];
    const Matrix filt = forward.cov[ku];
    // A_k^T = (M^f_{k+1|k})^{-1} M^f_k
    const Matrix gain = spd_solve(pred, filt).transpose();
    for (int i = 0; i < d; ++i) {
      diff(i) = out.mean(i, k + 1) - forward.mean(i, k);
    }
    const Vector corr = gain * diff;
    for (int i = 0; i < d; ++i) {
      out.mean(i, k) = forward.mean(i, k) + corr(i);
    }
    auto mk = out.cov[ku];
    mk = filt + gain * (Matrix(out.cov[ku + 1]) - pred) * gain.transpose();
    symmetrize(mk);
  }
  return out;
}

PhasePosterior extended_kalman_smoother(const ComplexGrid& r, const SoftSymbolStats& stats,
                                        const CovarianceSpec& cov, const EksOptions& options) {
  return rtss_backward(ekf_forward(r, stats, cov, options), cov);
}

double single_step_phase_estimate(cplx r, cplx s, double theta_prev) {
  if (s == cplx{}) {
    throw ZeroSymbol("single_step_phase_estimate: transmitted symbol is zero");
  }
  return theta_prev + (r * std::polar(1.0, -theta_prev) / s).imag();
}

}  // namespace pnc
