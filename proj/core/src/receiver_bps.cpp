#include "pnc/receiver_bps.hpp"

#include "pnc/error.hpp"
#include "pnc/llr.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace pnc {

BpsConfig default_bps_config(int order) {
  BpsConfig cfg;
  cfg.test_phases = order <= 16 ? 32 : 64;
  cfg.window_half_length = 40;
  cfg.known_initial_phase = true;
  return cfg;
}

std::vector<double> bps_estimate(std::span<const cplx> r, const Constellation& c,
                                 const BpsConfig& config, double initial_phase) {
  if (config.test_phases < 2 || config.window_half_length < 0) {
    throw InvalidRate("bps_estimate: need at least two test phases and a nonnegative window");
  }
  const std::size_t n = r.size();
  const auto b_count = static_cast<std::size_t>(config.test_phases);
  const double quarter = 0.5 * std::numbers::pi;
  const double spacing = quarter / static_cast<double>(b_count);

  // Running sums over k of the nearest-point distance for each test phase.
  std::vector<double> prefix((n + 1) * b_count, 0.0);
  for (std::size_t b = 0; b < b_count; ++b) {
    const cplx rot = std::polar(1.0, -spacing * static_cast<double>(b));
    for (std::size_t k = 0; k < n; ++k) {
      const cplx y = r[k] * rot;
      const double dist = std::norm(y - c.point(c.nearest(y)));
      prefix[(k + 1) * b_count + b] = prefix[k * b_count + b] + dist;
    }
  }

  std::vector<double> phase(n);
  const auto half = static_cast<std::size_t>(config.window_half_length);
  double previous = initial_phase;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(n, k + half + 1);
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < b_count; ++b) {
      const double cost = prefix[hi * b_count + b] - prefix[lo * b_count + b];
      if (cost < best_cost) {
        best_cost = cost;
        best = b;
      }
    }
    const double raw = spacing * static_cast<double>(best);
    if (k == 0 && !config.known_initial_phase) {
      previous = raw;
    }
    const double branches = std::round((previous - raw) / quarter);
    phase[k] = raw + branches * quarter;
    previous = phase[k];
  }
  return phase;
}

EddOutput edd_detect(std::span<const cplx> r, std::span<const double> phase,
                     const Constellation& c, double sigma2) {
  if (r.size() != phase.size()) {
    throw LengthMismatch("edd_detect: sample and phase sequences differ in length");
  }
  const auto bits = static_cast<std::size_t>(c.bits_per_symbol());
  EddOutput out;
  out.decisions.resize(r.size());
  out.llrs.resize(r.size() * bits);
  std::vector<double> log_w(c.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    const cplx y = r[k] * std::polar(1.0, -phase[k]);
    out.decisions[k] = c.nearest(y);
    for (std::size_t j = 0; j < c.size(); ++j) {
      log_w[j] = -std::norm(y - c.point(j)) / (2.0 * sigma2);
    }
    log_weights_to_llr(log_w, c, std::span<double>(out.llrs).subspan(k * bits, bits));
  }
  return out;
}

}  // namespace pnc
