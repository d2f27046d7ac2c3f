#include "pnc/model.hpp"

#include "pnc/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace pnc {

Constellation::Constellation(std::vector<cplx> points, std::vector<std::uint32_t> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  const std::size_t m = points_.size();
  if (m < 2 || !std::has_single_bit(m) || labels_.size() != m) {
    throw InvalidMatrix("Constellation: size must be a power of two with one label per point");
  }
  bits_ = std::countr_zero(m);
  by_label_.assign(m, m);
  for (std::size_t idx = 0; idx < m; ++idx) {
    const auto lbl = labels_[idx];
    if (lbl >= m || by_label_[lbl] != m) {
      throw InvalidMatrix("Constellation: labels are not a bijection onto {0,1}^Rm");
    }
    by_label_[lbl] = idx;
  }
  cplx mean{};
  double energy = 0.0;
  for (const auto& p : points_) {
    mean += p;
    energy += std::norm(p);
  }
  mean /= static_cast<double>(m);
  energy_ = energy / static_cast<double>(m);
  if (std::abs(mean) > 1e-12 * std::max(1.0, std::sqrt(energy_))) {
    throw InvalidMatrix("Constellation: points are not zero-mean");
  }
}

std::size_t Constellation::nearest(cplx z) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < points_.size(); ++idx) {
    const double d = std::norm(z - points_[idx]);
    if (d < best_d) {
      best_d = d;
      best = idx;
    }
  }
  return best;
}

Constellation make_qam(int order, double es) {
  if (order != 4 && order != 16 && order != 64 && order != 256) {
    throw UnsupportedOrder("make_qam: order must be 4, 16, 64 or 256");
  }
  if (!(es > 0.0)) {
    throw UnsupportedOrder("make_qam: symbol energy must be positive");
  }
  const int side = static_cast<int>(std::lround(std::sqrt(order)));
  const int axis_bits = std::countr_zero(static_cast<unsigned>(side));
  // Mean energy of the unscaled grid {+-1, +-3, ...}^2 is 2 (M - 1) / 3.
  const double scale = std::sqrt(es * 3.0 / (2.0 * (order - 1)));

  std::vector<cplx> points;
  std::vector<std::uint32_t> labels;
  points.reserve(static_cast<std::size_t>(order));
  labels.reserve(static_cast<std::size_t>(order));
  for (int a = 0; a < side; ++a) {
    for (int b = 0; b < side; ++b) {
      const double re = (2.0 * a - side + 1) * scale;
      const double im = (2.0 * b - side + 1) * scale;
      const auto gray_a = static_cast<std::uint32_t>(a ^ (a >> 1));
      const auto gray_b = static_cast<std::uint32_t>(b ^ (b >> 1));
      points.emplace_back(re, im);
      labels.push_back((gray_a << axis_bits) | gray_b);
    }
  }
  return Constellation(std::move(points), std::move(labels));
}

std::size_t PilotGrid::pilot_count() const {
  return static_cast<std::size_t>(
      std::count_if(mask.values().begin(), mask.values().end(), [](auto v) { return v != 0; }));
}

std::string PilotGrid::mask_text() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(channels()) * static_cast<std::size_t>(length() + 1));
  for (int i = 0; i < channels(); ++i) {
    for (int k = 0; k < length(); ++k) {
      out.push_back(is_pilot(i, k) ? 'P' : 'D');
    }
    out.push_back('\n');
  }
  return out;
}

PilotGrid PilotGrid::empty(int channels, int length) {
  return PilotGrid{Grid<std::uint8_t>(channels, length, 0), Grid<int>(channels, length, -1),
                   ComplexGrid(channels, length)};
}

void PilotGrid::set_pilot(int i, int k, const Constellation& c, std::size_t idx) {
  mask(i, k) = 1;
  symbol(i, k) = static_cast<int>(idx);
  value(i, k) = c.point(idx);
}

PilotGrid PilotGrid::from_mask_text(std::string_view text, const Constellation& c, Rng& rng) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (!line.empty()) {
      rows.push_back(line);
    }
  }
  if (rows.empty()) {
    throw ParseError("pilot mask: no rows");
  }
  const auto length = rows.front().size();
  PilotGrid grid = empty(static_cast<int>(rows.size()), static_cast<int>(length));
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != length) {
      throw ParseError("pilot mask: ragged rows");
    }
    for (std::size_t k = 0; k < length; ++k) {
      const char ch = rows[i][k];
      if (ch == 'P') {
        grid.set_pilot(static_cast<int>(i), static_cast<int>(k), c, pick(rng));
      } else if (ch != 'D') {
        throw ParseError("pilot mask: expected 'P' or 'D'");
      }
    }
  }
  return grid;
}

WrappedDiagonal wrapped_diagonal_layout(int channels, double pilot_rate) {
  if (!(pilot_rate > 0.0 && pilot_rate < 1.0)) {
    throw InvalidRate("pilot rate must lie in (0, 1)");
  }
  if (channels < 1) {
    throw DimensionMismatch("wrapped_diagonal_layout: need at least one channel");
  }
  const auto period = static_cast<int>(std::lround(1.0 / pilot_rate));
  if (period < 1) {
    throw InvalidRate("pilot rate rounds to a zero period");
  }
  return {period, period / channels};
}

Grid<std::uint8_t> wrapped_diagonal_mask(int channels, int length, WrappedDiagonal layout) {
  if (layout.period < 1 || layout.stagger < 0) {
    throw InvalidRate("wrapped diagonal: period must be >= 1 and stagger >= 0");
  }
  Grid<std::uint8_t> mask(channels, length, 0);
  for (int i = 0; i < channels; ++i) {
    const int offset = static_cast<int>((static_cast<long long>(i) * layout.stagger) % layout.period);
    for (int k = offset; k < length; k += layout.period) {
      mask(i, k) = 1;
    }
  }
  return mask;
}

PilotGrid place_pilots_wrapped_diagonal(int channels, int length, WrappedDiagonal layout,
                                        const Constellation& c, Rng& rng) {
  const auto mask = wrapped_diagonal_mask(channels, length, layout);
  PilotGrid grid = PilotGrid::empty(channels, length);
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  for (int i = 0; i < channels; ++i) {
    for (int k = 0; k < length; ++k) {
      if (mask(i, k)) {
        grid.set_pilot(i, k, c, pick(rng));
      }
    }
  }
  return grid;
}

PilotGrid place_pilots_wrapped_diagonal(int channels, int length, double pilot_rate,
                                        const Constellation& c, Rng& rng) {
  return place_pilots_wrapped_diagonal(channels, length,
                                       wrapped_diagonal_layout(channels, pilot_rate), c, rng);
}

CovarianceSpec::CovarianceSpec(SymMatrix q_, std::vector<double> sigma2_)
    : q(std::move(q_)), sigma2(std::move(sigma2_)) {
  if (q.dim() != static_cast<Eigen::Index>(sigma2.size())) {
    throw DimensionMismatch("CovarianceSpec: Q and sigma2 sizes differ");
  }
  for (double s : sigma2) {
    if (!(s > 0.0)) {
      throw InvalidMatrix("CovarianceSpec: noise variances must be positive");
    }
  }
  if (q.dim() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(q.matrix(), Eigen::EigenvaluesOnly);
    const double tol = 1e-9 * std::max(1e-300, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -tol) {
      throw NotPsd("CovarianceSpec: Q is not positive semidefinite");
    }
  }
}

CovarianceSpec CovarianceSpec::per_channel() const { return {q.diagonal_part(), sigma2}; }

SymMatrix build_covariance(double var_lpn, double var_drift, int channels) {
  if (var_lpn < 0.0 || var_drift < 0.0) {
    throw InvalidMatrix("build_covariance: variances must be nonnegative");
  }
  Matrix q = Matrix::Constant(channels, channels, var_lpn);
  q.diagonal().array() += var_drift;
  return SymMatrix(q);
}

double laser_phase_variance(double linewidth_symbol_product) {
  return 2.0 * std::numbers::pi * linewidth_symbol_product;
}

}  // namespace pnc
