#include "pnc/symbol_pmf.hpp"

#include "pnc/error.hpp"

#include <algorithm>
#include <cmath>

namespace pnc {

SymbolPmfGrid SymbolPmfGrid::uniform(int channels, int length, std::size_t points) {
  SymbolPmfGrid g(channels, length, points);
  std::fill(g.p_.begin(), g.p_.end(), 1.0 / static_cast<double>(points));
  return g;
}

void SymbolPmfGrid::check_normalized(double tol) const {
  for (int i = 0; i < channels_; ++i) {
    for (int k = 0; k < length_; ++k) {
      double sum = 0.0;
      for (double v : slot(i, k)) {
        if (!(v >= 0.0)) {
          throw UnnormalizedPmf("symbol PMF has a negative or NaN entry");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > tol) {
        throw UnnormalizedPmf("symbol PMF does not sum to one");
      }
    }
  }
}

void normalize_log_weights(std::span<const double> log_w, std::span<double> out) {
  const double top = *std::max_element(log_w.begin(), log_w.end());
  double sum = 0.0;
  for (std::size_t j = 0; j < log_w.size(); ++j) {
    out[j] = std::exp(log_w[j] - top);
    sum += out[j];
  }
  for (double& v : out) {
    v /= sum;
  }
}

PmfMoments pmf_moments(std::span<const double> pmf, const Constellation& c) {
  PmfMoments m;
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    m.mean += pmf[j] * c.point(j);
  }
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    m.variance += pmf[j] * std::norm(c.point(j) - m.mean);
  }
  return m;
}

}  // namespace pnc
