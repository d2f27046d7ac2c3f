#include "pnc/receiver_vb.hpp"

#include "pnc/error.hpp"

#include <cmath>
#include <vector>

namespace pnc {

SoftSymbolStats vb_soft_means(const SymbolPmfGrid& qs, const Constellation& c,
                              const CovarianceSpec& cov, const PilotGrid& pilots) {
  if (qs.points() != c.size() || qs.channels() != cov.channels() ||
      !pilots.mask.same_shape(qs.channels(), qs.length())) {
    throw DimensionMismatch("vb_soft_means: PMF grid, constellation and pilots disagree");
  }
  const int d = qs.channels();
  const int n = qs.length();
  SoftSymbolStats out(d, n);
  for (int i = 0; i < d; ++i) {
    const double sigma2 = cov.sigma2[static_cast<std::size_t>(i)];
    for (int k = 0; k < n; ++k) {
      out.eff_var(i, k) = sigma2;
      if (pilots.is_pilot(i, k)) {
        out.mean(i, k) = pilots.value(i, k);
        out.known(i, k) = 1;
        continue;
      }
      const auto slot = qs.slot(i, k);
      double sum = 0.0;
      cplx mean{};
      for (std::size_t j = 0; j < slot.size(); ++j) {
        sum += slot[j];
        mean += slot[j] * c.point(j);
      }
      if (!(std::abs(sum - 1.0) <= 1e-6)) {
        throw UnnormalizedPmf("vb_soft_means: PMF does not sum to one");
      }
      out.mean(i, k) = mean;
    }
  }
  return out;
}

ComplexGrid circular_moment(const PhasePosterior& posterior) {
  ComplexGrid alpha(posterior.channels(), posterior.length());
  for (int i = 0; i < posterior.channels(); ++i) {
    for (int k = 0; k < posterior.length(); ++k) {
      const double var = std::max(0.0, posterior.marginal_variance(i, k));
      alpha(i, k) = std::polar(std::exp(-0.5 * var), posterior.mean(i, k));
    }
  }
  return alpha;
}

SymbolPmfGrid compute_g(const ComplexGrid& r, const ComplexGrid& alpha, const Constellation& c,
                        const CovarianceSpec& cov) {
  if (!alpha.same_shape(r) || cov.channels() != r.channels()) {
    throw DimensionMismatch("compute_g: dimensions disagree");
  }
  SymbolPmfGrid out(r.channels(), r.length(), c.size());
  std::vector<double> log_g(c.size());
  for (int i = 0; i < r.channels(); ++i) {
    const double sigma2 = cov.sigma2[static_cast<std::size_t>(i)];
    for (int k = 0; k < r.length(); ++k) {
      const cplx ra = r(i, k) * std::conj(alpha(i, k));
      for (std::size_t j = 0; j < c.size(); ++j) {
        const cplx s = c.point(j);
        log_g[j] = ((ra * std::conj(s)).real() - 0.5 * std::norm(s)) / sigma2;
      }
      normalize_log_weights(log_g, out.slot(i, k));
    }
  }
  return out;
}

IterationOutput vb_pnc_iteration(const ComplexGrid& r, const SymbolPmfGrid& qs,
                                 const CovarianceSpec& cov, const PilotGrid& pilots,
                                 const Constellation& c) {
  const SoftSymbolStats stats = vb_soft_means(qs, c, cov, pilots);
  EksOptions options;
  options.init = InitialVariance::awgn;
  options.symbol_energy = c.energy();
  PhasePosterior phase = extended_kalman_smoother(r, stats, cov, options);
  SymbolPmfGrid g = compute_g(r, circular_moment(phase), c, cov);
  return {std::move(g), std::move(phase)};
}

}  // namespace pnc
