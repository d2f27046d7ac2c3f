#pragma once

#include "pnc/model.hpp"

#include <span>
#include <vector>

namespace pnc {

/// One probability mass function over the constellation per slot (i, k).
class SymbolPmfGrid {
 public:
  SymbolPmfGrid() = default;
  SymbolPmfGrid(int channels, int length, std::size_t points)
      : channels_(channels), length_(length), points_(points),
        p_(static_cast<std::size_t>(channels) * static_cast<std::size_t>(length) * points, 0.0) {}

  static SymbolPmfGrid uniform(int channels, int length, std::size_t points);

  int channels() const { return channels_; }
  int length() const { return length_; }
  std::size_t points() const { return points_; }

  std::span<double> slot(int i, int k) { return {p_.data() + offset(i, k), points_}; }
  std::span<const double> slot(int i, int k) const { return {p_.data() + offset(i, k), points_}; }

  /// Throws UnnormalizedPmf if any slot has a negative entry or does not
  /// sum to one within tol.
  void check_normalized(double tol = 1e-6) const;

 private:
  std::size_t offset(int i, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(length_) +
            static_cast<std::size_t>(k)) *
           points_;
  }

  int channels_ = 0;
  int length_ = 0;
  std::size_t points_ = 0;
  std::vector<double> p_;
};

/// Writes exp(log_w - max log_w) / sum into out.
void normalize_log_weights(std::span<const double> log_w, std::span<double> out);

/// Weighted mean and second central moment sum |s - mean|^2 p(s).
struct PmfMoments {
  cplx mean;
  double variance = 0.0;
};
PmfMoments pmf_moments(std::span<const double> pmf, const Constellation& c);

}  // namespace pnc
