#pragma once

#include "pnc/model.hpp"

#include <span>
#include <vector>

namespace pnc {

struct BpsConfig {
  int test_phases = 32;
  /// Box filter spans 2 * window_half_length + 1 symbols.
  int window_half_length = 40;
  /// Anchor the unwrapping to a known phase at k = 1 instead of the first
  /// blind estimate.
  bool known_initial_phase = true;

  int window_length() const { return 2 * window_half_length + 1; }
};

/// 32 test phases for 16QAM and below, 64 above; window of 81 symbols.
BpsConfig default_bps_config(int order);

/// Blind phase search over test phases spanning [0, pi/2), unwrapped by
/// picking the pi/2 branch closest to the previous estimate.
std::vector<double> bps_estimate(std::span<const cplx> r, const Constellation& c,
                                 const BpsConfig& config, double initial_phase = 0.0);

struct EddOutput {
  std::vector<std::size_t> decisions;
  /// Rm LLRs per symbol, ln P(c=0)/P(c=1), from the de-rotated AWGN likelihood.
  std::vector<double> llrs;
};

/// Minimum-distance decisions on r e^{-j phase} and exact AWGN bit LLRs that
/// treat the phase estimates as correct.
EddOutput edd_detect(std::span<const cplx> r, std::span<const double> phase,
                     const Constellation& c, double sigma2);

}  // namespace pnc
