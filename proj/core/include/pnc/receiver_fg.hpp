#pragma once

#include "pnc/eks.hpp"
#include "pnc/symbol_pmf.hpp"

namespace pnc {

/// Gaussian projection of the decoder message: mean sum s Pd(s) and
/// effective variance sigma^2 + Var(S)/2. Pilot slots are pinned to the
/// pilot value with variance sigma^2.
SoftSymbolStats project_soft_stats(const SymbolPmfGrid& pd, const Constellation& c,
                                   const CovarianceSpec& cov, const PilotGrid& pilots);

/// Symbol likelihood message towards the decoder, one PMF per slot, from the
/// Tikhonov-approximated closed form
///   f(s) = |xi(s)| - |s|^2 / (2 sigma^2) - ln|xi(s)| / 2,
///   xi(s) = e^{j theta_s} / M_s + r s^* / sigma^2 - r sbar^* / sigma_tilde^2.
SymbolPmfGrid compute_pu(const ComplexGrid& r, const SoftSymbolStats& stats,
                         const PhasePosterior& posterior, const Constellation& c,
                         const CovarianceSpec& cov);

/// Log-metric f(s) for a single slot up to an additive constant, one entry
/// per constellation point.
void tikhonov_log_metric(cplx r, cplx soft_mean, double eff_var, double phase_mean,
                         double phase_var, double sigma2, const Constellation& c,
                         std::span<double> out);

struct IterationOutput {
  SymbolPmfGrid likelihood;
  PhasePosterior phase;
};

/// One factor-graph iteration: soft statistics, smoother, symbol messages.
IterationOutput fg_pnc_iteration(const ComplexGrid& r, const SymbolPmfGrid& pd,
                                 const CovarianceSpec& cov, const PilotGrid& pilots,
                                 const Constellation& c);

}  // namespace pnc
