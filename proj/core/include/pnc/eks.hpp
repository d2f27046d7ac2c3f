#pragma once

#include "pnc/model.hpp"

namespace pnc {

/// Per-slot soft symbol used as the EKS observation model: r ~ CN(mean e^{j theta}, 2 eff_var).
struct SoftSymbolStats {
  ComplexGrid mean;
  RealGrid eff_var;
  /// Nonzero where the symbol is known (pilots). May be left empty.
  Grid<std::uint8_t> known;

  SoftSymbolStats() = default;
  SoftSymbolStats(int channels, int length)
      : mean(channels, length), eff_var(channels, length, 1.0), known(channels, length, 0) {}

  bool is_known(int i, int k) const { return known.same_shape(mean) && known(i, k) != 0; }
};

/// Which variance initializes the filter covariance at k = 1:
/// the per-slot effective variance (factor-graph receiver) or the AWGN
/// variance (variational receiver).
enum class InitialVariance { effective, awgn };

struct EksOptions {
  InitialVariance init = InitialVariance::effective;
  double symbol_energy = 1.0;
  /// Prior variance (rad^2) for a channel whose first slot carries no
  /// information (zero soft mean).
  double uninformative_variance = 1e4;
  /// When the predicted marginal variance of a channel exceeds this, the
  /// observation is linearized around its own angle instead of the
  /// predicted mean. Linearizing around a mean that is off by more than about
  /// a radian folds the residual through sin() and locks onto the wrong phase.
  double relinearize_variance = 1.0;
  /// Same treatment for a known symbol that carries more information than the
  /// prediction (V * M_pred above this). An outlier pilot early in a channel
  /// otherwise pins the track, and the next good pilot only pulls it back by
  /// sin() of the residual. Data slots keep the sin() saturation, which is
  /// what limits the damage from wrong decisions.
  double relinearize_info_ratio = 1.0;
};

/// Forward filter output. cov[k] = M^f_k, predicted[k] = M^f_{k|k-1}
/// (predicted[0] is unused and left zero).
struct ForwardPass {
  RealGrid mean;
  MatrixSequence cov;
  MatrixSequence predicted;
};

/// Gaussian approximation N(mean(:, k), cov[k]) of p(theta_k | r).
struct PhasePosterior {
  RealGrid mean;
  MatrixSequence cov;

  int channels() const { return mean.channels(); }
  int length() const { return mean.length(); }
  double marginal_variance(int i, int k) const {
    return cov[static_cast<std::size_t>(k)](i, i);
  }
};

ForwardPass ekf_forward(const ComplexGrid& r, const SoftSymbolStats& stats,
                        const CovarianceSpec& cov, const EksOptions& options = {});

PhasePosterior rtss_backward(const ForwardPass& forward, const CovarianceSpec& cov);

/// Forward EKF followed by the RTS backward pass.
PhasePosterior extended_kalman_smoother(const ComplexGrid& r, const SoftSymbolStats& stats,
                                        const CovarianceSpec& cov, const EksOptions& options = {});

/// theta_prev + Im{r e^{-j theta_prev} / s}: the linearized one-sample phase
/// estimate. Throws ZeroSymbol when s == 0.
double single_step_phase_estimate(cplx r, cplx s, double theta_prev);

}  // namespace pnc
