#pragma once

#include "pnc/numerics.hpp"

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pnc {

using cplx = std::complex<double>;
using Rng = std::mt19937_64;

/// Row-major channels x time grid. Row i is channel i, column k is time k
/// (both zero-based).
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int channels, int length, T fill = T{})
      : channels_(channels), length_(length),
        data_(static_cast<std::size_t>(channels) * static_cast<std::size_t>(length), fill) {}

  int channels() const { return channels_; }
  int length() const { return length_; }

  T& operator()(int i, int k) { return data_[index(i, k)]; }
  const T& operator()(int i, int k) const { return data_[index(i, k)]; }

  std::span<T> row(int i) {
    return {data_.data() + index(i, 0), static_cast<std::size_t>(length_)};
  }
  std::span<const T> row(int i) const {
    return {data_.data() + index(i, 0), static_cast<std::size_t>(length_)};
  }

  bool same_shape(int channels, int length) const {
    return channels_ == channels && length_ == length;
  }
  template <class U>
  bool same_shape(const Grid<U>& other) const {
    return same_shape(other.channels(), other.length());
  }

  const std::vector<T>& values() const { return data_; }
  std::vector<T>& values() { return data_; }

 private:
  std::size_t index(int i, int k) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(length_) +
           static_cast<std::size_t>(k);
  }

  int channels_ = 0;
  int length_ = 0;
  std::vector<T> data_;
};

using ComplexGrid = Grid<cplx>;
using RealGrid = Grid<double>;

/// Zero-mean constellation with a binary labeling. Label bit j (j = 0 is the
/// first coded bit mapped onto the symbol) is (label >> (Rm - 1 - j)) & 1.
class Constellation {
 public:
  Constellation(std::vector<cplx> points, std::vector<std::uint32_t> labels);

  std::size_t size() const { return points_.size(); }
  int bits_per_symbol() const { return bits_; }
  double energy() const { return energy_; }

  std::span<const cplx> points() const { return points_; }
  cplx point(std::size_t idx) const { return points_[idx]; }
  std::uint32_t label(std::size_t idx) const { return labels_[idx]; }
  int bit(std::size_t idx, int j) const {
    return static_cast<int>((labels_[idx] >> (bits_ - 1 - j)) & 1U);
  }
  std::size_t index_of_label(std::uint32_t label) const { return by_label_[label]; }

  /// Index of the point closest to z.
  std::size_t nearest(cplx z) const;

 private:
  std::vector<cplx> points_;
  std::vector<std::uint32_t> labels_;
  std::vector<std::size_t> by_label_;
  int bits_ = 0;
  double energy_ = 0.0;
};

/// Square QAM (4, 16, 64, 256) with per-axis Gray labels, scaled to energy es.
Constellation make_qam(int order, double es = 1.0);

/// Known-symbol layout of a frame. mask(i, k) != 0 marks a pilot slot whose
/// transmitted symbol is symbol(i, k) (constellation index); data slots hold -1.
struct PilotGrid {
  Grid<std::uint8_t> mask;
  Grid<int> symbol;
  ComplexGrid value;

  int channels() const { return mask.channels(); }
  int length() const { return mask.length(); }
  bool is_pilot(int i, int k) const { return mask(i, k) != 0; }
  std::size_t pilot_count() const;

  /// Rows are channels, 'P' for pilot and 'D' for data, one row per line.
  std::string mask_text() const;

  static PilotGrid empty(int channels, int length);
  /// Mask parsed from mask_text() form; pilot symbols drawn from rng.
  static PilotGrid from_mask_text(std::string_view text, const Constellation& c, Rng& rng);

  /// Marks slot (i, k) as a pilot carrying constellation point idx.
  void set_pilot(int i, int k, const Constellation& c, std::size_t idx);
};

struct WrappedDiagonal {
  int period = 1;   // Tp = round(1 / Rp)
  int stagger = 0;  // time offset between consecutive channels
};

WrappedDiagonal wrapped_diagonal_layout(int channels, double pilot_rate);

/// Pilot mask of the wrapped diagonal: channel i (zero-based) carries a pilot
/// at every time k with (k - i * stagger) mod period == 0.
Grid<std::uint8_t> wrapped_diagonal_mask(int channels, int length, WrappedDiagonal layout);

/// Channel i (zero-based) carries a pilot at every time k with
/// (k - i * stagger) mod period == 0. Pilot symbols are uniform over c.
PilotGrid place_pilots_wrapped_diagonal(int channels, int length, double pilot_rate,
                                        const Constellation& c, Rng& rng);
PilotGrid place_pilots_wrapped_diagonal(int channels, int length, WrappedDiagonal layout,
                                        const Constellation& c, Rng& rng);

/// Phase-increment covariance Q and per-channel AWGN variance per real
/// dimension.
struct CovarianceSpec {
  SymMatrix q;
  std::vector<double> sigma2;

  CovarianceSpec() = default;
  CovarianceSpec(SymMatrix q_, std::vector<double> sigma2_);

  int channels() const { return static_cast<int>(sigma2.size()); }
  /// Same noise, Q with its cross-channel terms removed.
  CovarianceSpec per_channel() const;
};

/// Q with var_lpn + var_drift on the diagonal and var_lpn elsewhere.
SymMatrix build_covariance(double var_lpn, double var_drift, int channels);

/// 2 pi * linewidth * symbol duration.
double laser_phase_variance(double linewidth_symbol_product);

}  // namespace pnc
