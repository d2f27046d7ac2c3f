#include "pnc/llr.hpp"

#include "pnc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pnc {

std::vector<double> LlrFrame::extrinsic() const {
  if (input.size() != posterior.size()) {
    throw LengthMismatch("LlrFrame: input and posterior sizes differ");
  }
  std::vector<double> out(input.size());
  for (std::size_t t = 0; t < input.size(); ++t) {
    out[t] = posterior[t] - input[t];
  }
  return out;
}

void pmf_to_llr(std::span<const double> pmf, const Constellation& c, std::span<double> out) {
  const int bits = c.bits_per_symbol();
  if (pmf.size() != c.size() || out.size() != static_cast<std::size_t>(bits)) {
    throw DimensionMismatch("pmf_to_llr: size mismatch");
  }
  for (int j = 0; j < bits; ++j) {
    double p0 = 0.0;
    double p1 = 0.0;
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
      (c.bit(idx, j) ? p1 : p0) += pmf[idx];
    }
    double llr = 0.0;
    if (p0 <= 0.0 && p1 <= 0.0) {
      llr = 0.0;
    } else if (p1 <= 0.0) {
      llr = kLlrClamp;
    } else if (p0 <= 0.0) {
      llr = -kLlrClamp;
    } else {
      llr = std::clamp(std::log(p0 / p1), -kLlrClamp, kLlrClamp);
    }
    out[static_cast<std::size_t>(j)] = llr;
  }
}

void log_weights_to_llr(std::span<const double> log_w, const Constellation& c,
                        std::span<double> out) {
  const int bits = c.bits_per_symbol();
  if (log_w.size() != c.size() || out.size() != static_cast<std::size_t>(bits)) {
    throw DimensionMismatch("log_weights_to_llr: size mismatch");
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  for (int j = 0; j < bits; ++j) {
    double s0 = 0.0;
    double s1 = 0.0;
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
      (c.bit(idx, j) ? s1 : s0) += std::exp(log_w[idx] - top);
    }
    double llr = 0.0;
    if (s1 <= 0.0) {
      llr = kLlrClamp;
    } else if (s0 <= 0.0) {
      llr = -kLlrClamp;
    } else {
      llr = std::clamp(std::log(s0 / s1), -kLlrClamp, kLlrClamp);
    }
    out[static_cast<std::size_t>(j)] = llr;
  }
}

void llr_to_symbol_pmf(std::span<const double> llrs, const Constellation& c,
                       std::span<double> out) {
  const int bits = c.bits_per_symbol();
  if (llrs.size() != static_cast<std::size_t>(bits) || out.size() != c.size()) {
    throw DimensionMismatch("llr_to_symbol_pmf: size mismatch");
  }
  // log P(c = nu) = -log(1 + e^{-L}) for nu = 0 and -log(1 + e^{L}) for nu = 1.
  auto log1pexp = [](double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); };
  double total = 0.0;
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    double lp = 0.0;
    for (int j = 0; j < bits; ++j) {
      const double l = std::clamp(llrs[static_cast<std::size_t>(j)], -kLlrClamp, kLlrClamp);
      lp -= c.bit(idx, j) ? log1pexp(l) : log1pexp(-l);
    }
    out[idx] = std::exp(lp);
    total += out[idx];
  }
  for (double& v : out) {
    v /= total;
  }
}

}  // namespace pnc
