#pragma once

#include "pnc/model.hpp"

#include <span>
#include <vector>

namespace pnc {

inline constexpr double kLlrClamp = 50.0;

/// Bit-level interface of one codeword: the input LLRs L(c) handed to the
/// decoder and the a-posteriori LLRs L(c|r) it returns.
struct LlrFrame {
  std::vector<double> input;
  std::vector<double> posterior;

  /// L_e(c) = L(c|r) - L(c).
  std::vector<double> extrinsic() const;
};

enum class LlrMode { extrinsic, aposteriori };

/// L(c^j) = ln(sum_{s in B0} p(s) / sum_{s in B1} p(s)) for the Rm label bits
/// of one slot, clamped to +-50.
void pmf_to_llr(std::span<const double> pmf, const Constellation& c, std::span<double> out);

/// Same, from unnormalized log weights (log-sum-exp over each bit partition).
void log_weights_to_llr(std::span<const double> log_w, const Constellation& c,
                        std::span<double> out);

/// Product-form PMF prod_j P(c^j = label bit j) with P(c = 0) = e^L / (1 + e^L).
void llr_to_symbol_pmf(std::span<const double> llrs, const Constellation& c,
                       std::span<double> out);

}  // namespace pnc
