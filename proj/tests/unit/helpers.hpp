#pragma once

#include "pnc/model.hpp"
#include "pnc/symbol_pmf.hpp"

#include <cmath>
#include <random>
#include <span>
#include <vector>

namespace pnc::testing {

inline Matrix random_spd(int dim, Rng& rng, double ridge = 0.5) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
  Matrix s = a * a.transpose() / dim;
  s.diagonal().array() += ridge;
  return 0.5 * (s + s.transpose());
}

inline std::vector<double> random_pmf(std::size_t size, Rng& rng, double peak = 1.0) {
  std::gamma_distribution<double> g(peak, 1.0);
  std::vector<double> p(size);
  double total = 0.0;
  for (auto& v : p) total += v = g(rng) + 1e-12;
  for (auto& v : p) v /= total;
  return p;
}

inline double total_variation(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) acc += std::abs(a[t] - b[t]);
  return 0.5 * acc;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace pnc::testing
