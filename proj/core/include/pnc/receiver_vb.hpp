#pragma once

#include "pnc/receiver_fg.hpp"

namespace pnc {

/// Soft means sum s q(s) with effective variance equal to sigma^2; pilot
/// slots pinned to their values.
SoftSymbolStats vb_soft_means(const SymbolPmfGrid& qs, const Constellation& c,
                              const CovarianceSpec& cov, const PilotGrid& pilots);

/// alpha(i, k) = E[e^{j Theta}] = exp(j theta_s - M_s / 2).
ComplexGrid circular_moment(const PhasePosterior& posterior);

/// g(s) proportional to exp(Re{r s^* alpha^*} / sigma^2 - |s|^2 / (2 sigma^2)),
/// normalized per slot.
SymbolPmfGrid compute_g(const ComplexGrid& r, const ComplexGrid& alpha, const Constellation& c,
                        const CovarianceSpec& cov);

IterationOutput vb_pnc_iteration(const ComplexGrid& r, const SymbolPmfGrid& qs,
                                 const CovarianceSpec& cov, const PilotGrid& pilots,
                                 const Constellation& c);

}  // namespace pnc
