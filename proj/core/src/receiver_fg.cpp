#include "pnc/receiver_fg.hpp"

#include "pnc/error.hpp"

#include <cmath>
#include <vector>

namespace pnc {
namespace {

constexpr double kMinXi = 1e-12;

void check_shapes(const SymbolPmfGrid& pmf, const Constellation& c, const CovarianceSpec& cov,
                  const PilotGrid& pilots) {
  if (pmf.points() != c.size() || pmf.channels() != cov.channels() ||
      !pilots.mask.same_shape(pmf.channels(), pmf.length())) {
    throw DimensionMismatch("soft statistics: PMF grid, constellation and pilots disagree");
  }
}

}  // namespace

SoftSymbolStats project_soft_stats(const SymbolPmfGrid& pd, const Constellation& c,
                                   const CovarianceSpec& cov, const PilotGrid& pilots) {
  check_shapes(pd, c, cov, pilots);
  const int d = pd.channels();
  const int n = pd.length();
  SoftSymbolStats out(d, n);
  for (int i = 0; i < d; ++i) {
    const double sigma2 = cov.sigma2[static_cast<std::size_t>(i)];
    for (int k = 0; k < n; ++k) {
      if (pilots.is_pilot(i, k)) {
        out.mean(i, k) = pilots.value(i, k);
        out.known(i, k) = 1;
        out.eff_var(i, k) = sigma2;
        continue;
      }
      const auto slot = pd.slot(i, k);
      double sum = 0.0;
      for (double v : slot) {
        sum += v;
      }
      if (!(std::abs(sum - 1.0) <= 1e-6)) {
        throw UnnormalizedPmf("project_soft_stats: PMF does not sum to one");
      }
      const PmfMoments m = pmf_moments(slot, c);
      out.mean(i, k) = m.mean;
      out.eff_var(i, k) = sigma2 + 0.5 * m.variance;
    }
  }
  return out;
}

void tikhonov_log_metric(cplx r, cplx soft_mean, double eff_var, double phase_mean,
                         double phase_var, double sigma2, const Constellation& c,
                         std::span<double> out) {
  // xi(s) = prior + a(s). |prior| is common to every s and is dropped; the
  // remainder |prior + a| - |prior| is formed without cancellation so that
  // tiny phase variances (huge |prior|) keep full precision.
  const cplx prior = std::polar(1.0 / phase_var, phase_mean);
  const double prior_abs = std::abs(prior);
  const cplx shared = -r * std::conj(soft_mean) / eff_var;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const cplx s = c.point(j);
    const cplx a = shared + r * std::conj(s) / sigma2;
    const double xi = std::abs(prior + a);
    const double denom = xi + prior_abs;
    const double excess =
        denom > 0.0 ? (std::norm(a) + 2.0 * (a * std::conj(prior)).real()) / denom : 0.0;
    out[j] = excess - std::norm(s) / (2.0 * sigma2) - 0.5 * std::log(std::max(xi, kMinXi));
  }
}

SymbolPmfGrid compute_pu(const ComplexGrid& r, const SoftSymbolStats& stats,
                         const PhasePosterior& posterior, const Constellation& c,
                         const CovarianceSpec& cov) {
  const int d = r.channels();
  const int n = r.length();
  if (!stats.mean.same_shape(r) || !posterior.mean.same_shape(r) || cov.channels() != d) {
    throw DimensionMismatch("compute_pu: dimensions disagree");
  }
  SymbolPmfGrid out(d, n, c.size());
  std::vector<double> log_f(c.size());
  for (int i = 0; i < d; ++i) {
    const double sigma2 = cov.sigma2[static_cast<std::size_t>(i)];
    for (int k = 0; k < n; ++k) {
      tikhonov_log_metric(r(i, k), stats.mean(i, k), stats.eff_var(i, k), posterior.mean(i, k),
                          posterior.marginal_variance(i, k), sigma2, c, log_f);
      normalize_log_weights(log_f, out.slot(i, k));
    }
  }
  return out;
}

IterationOutput fg_pnc_iteration(const ComplexGrid& r, const SymbolPmfGrid& pd,
                                 const CovarianceSpec& cov, const PilotGrid& pilots,
                                 const Constellation& c) {
  const SoftSymbolStats stats = project_soft_stats(pd, c, cov, pilots);
  EksOptions options;
  options.init = InitialVariance::effective;
  options.symbol_energy = c.energy();
  PhasePosterior phase = extended_kalman_smoother(r, stats, cov, options);
  SymbolPmfGrid pu = compute_pu(r, stats, phase, c, cov);
  return {std::move(pu), std::move(phase)};
}

}  // namespace pnc
