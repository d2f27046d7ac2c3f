#include "oracles.hpp"

#include "pnc/error.hpp"
#include "pnc/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace pnc::oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void normalize(std::vector<double>& p) {
  double total = 0.0;
  for (double v : p) total += v;
  for (double& v : p) v /= total;
}

// Exponentiate log values after subtracting the max, then normalize.
std::vector<double> from_logs(const std::vector<double>& logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> p(logs.size());
  for (std::size_t t = 0; t < logs.size(); ++t) p[t] = std::exp(logs[t] - top);
  normalize(p);
  return p;
}

// Wrapped Gaussian transition taps, indexed by offset -half..half.
std::vector<double> wrapped_kernel(double q, int points, double step, int& half) {
  if (q <= 0.0) {
    half = 0;
    return {1.0};
  }
  const double sd = std::sqrt(q);
  half = std::min(points / 2 - 1, static_cast<int>(std::ceil(14.0 * sd / step)) + 1);
  std::vector<double> taps(static_cast<std::size_t>(2 * half + 1), 0.0);
  for (int d = -half; d <= half; ++d) {
    double v = 0.0;
    for (int wrap = -3; wrap <= 3; ++wrap) {
      const double x = d * step + wrap * kTwoPi;
      v += std::exp(-0.5 * x * x / q);
    }
    taps[static_cast<std::size_t>(d + half)] = v;
  }
  normalize(taps);
  return taps;
}

std::vector<double> convolve(const std::vector<double>& p, const std::vector<double>& taps,
                             int half) {
  const int n = static_cast<int>(p.size());
  // circular padding so the inner loop has no wrap test
  std::vector<double> ext(static_cast<std::size_t>(n + 2 * half));
  for (int t = 0; t < n + 2 * half; ++t) ext[static_cast<std::size_t>(t)] = p[static_cast<std::size_t>(((t - half) % n + n) % n)];
  std::vector<double> out(p.size(), 0.0);
  const int width = 2 * half + 1;
  for (int a = 0; a < n; ++a) {
    // out[a] = sum_d taps[d + half] p[a - d]; ext[a + half - d] = p[a - d]
    const double* src = ext.data() + a;
    double acc = 0.0;
    for (int t = 0; t < width; ++t) acc += taps[static_cast<std::size_t>(width - 1 - t)] * src[t];
    out[static_cast<std::size_t>(a)] = acc;
  }
  return out;
}

std::vector<double> likelihood(cplx r, cplx s, double sigma2, const PhaseGrid& g) {
  std::vector<double> logs(static_cast<std::size_t>(g.num_points));
  for (int a = 0; a < g.num_points; ++a) {
    logs[static_cast<std::size_t>(a)] =
        (r * std::conj(s) * std::polar(1.0, -g.angle(a))).real() / sigma2;
  }
  return from_logs(logs);
}

void summarize(const std::vector<double>& p, const PhaseGrid& g, double& mean, double& var) {
  cplx m{};
  for (int a = 0; a < g.num_points; ++a) m += p[static_cast<std::size_t>(a)] * std::polar(1.0, g.angle(a));
  mean = std::arg(m);
  var = 0.0;
  for (int a = 0; a < g.num_points; ++a) {
    const double d = wrap_angle(g.angle(a) - mean);
    var += p[static_cast<std::size_t>(a)] * d * d;
  }
}

void check_grid(int points) {
  if (points < 1024 || (points & (points - 1)) != 0) {
    throw InvalidMatrix("phase grid size must be a power of two >= 1024");
  }
}

GridPosterior run_grid(std::span<const cplx> r, std::span<const cplx> s, double q, double sigma2,
                       int num_points, bool smooth) {
  check_grid(num_points);
  if (r.size() != s.size()) throw LengthMismatch("grid smoother: r and s differ in length");
  const PhaseGrid g(num_points);
  int half = 0;
  const auto taps = wrapped_kernel(q, num_points, g.step, half);
  const std::size_t n = r.size();

  std::vector<std::vector<double>> lik(n);
  for (std::size_t k = 0; k < n; ++k) lik[k] = likelihood(r[k], s[k], sigma2, g);

  std::vector<std::vector<double>> fwd(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> pred =
        k == 0 ? std::vector<double>(static_cast<std::size_t>(num_points), 1.0) : convolve(fwd[k - 1], taps, half);
    for (std::size_t a = 0; a < pred.size(); ++a) pred[a] *= lik[k][a];
    normalize(pred);
    fwd[k] = std::move(pred);
  }

  GridPosterior out;
  out.mean.resize(n);
  out.variance.resize(n);
  if (!smooth) {
    for (std::size_t k = 0; k < n; ++k) summarize(fwd[k], g, out.mean[k], out.variance[k]);
    return out;
  }
  std::vector<double> beta(static_cast<std::size_t>(num_points), 1.0);
  for (std::size_t kk = n; kk-- > 0;) {
    if (kk + 1 < n) {
      std::vector<double> msg(beta.size());
      for (std::size_t a = 0; a < msg.size(); ++a) msg[a] = lik[kk + 1][a] * beta[a];
      // kernel is symmetric, so the backward step is the same convolution
      beta = convolve(msg, taps, half);
      normalize(beta);
    }
    std::vector<double> post(beta.size());
    for (std::size_t a = 0; a < post.size(); ++a) post[a] = fwd[kk][a] * beta[a];
    normalize(post);
    summarize(post, g, out.mean[kk], out.variance[kk]);
  }
  return out;
}

}  // namespace

PhaseGrid::PhaseGrid(int points)
    : num_points(points), lo(-std::numbers::pi), step(kTwoPi / points),
      prob(static_cast<std::size_t>(points), 1.0 / points) {}

GridPosterior grid_bayes_smoother(std::span<const cplx> r, std::span<const cplx> s, double q,
                                  double sigma2, int num_points) {
  return run_grid(r, s, q, sigma2, num_points, true);
}

GridPosterior grid_bayes_smoother(const ComplexGrid& r, const ComplexGrid& s, const SymMatrix& q,
                                  double sigma2, int num_points) {
  if (r.channels() != 1 || s.channels() != 1 || q.dim() != 1) {
    throw UnsupportedDimension("grid smoother handles a single channel only");
  }
  return grid_bayes_smoother(r.row(0), s.row(0), q(0, 0), sigma2, num_points);
}

GridPosterior grid_bayes_filter(std::span<const cplx> r, std::span<const cplx> s, double q,
                                double sigma2, int num_points) {
  return run_grid(r, s, q, sigma2, num_points, false);
}

PhaseGrid grid_single_observation(cplx r, cplx s, double sigma2, int num_points) {
  check_grid(num_points);
  PhaseGrid g(num_points);
  g.prob = likelihood(r, s, sigma2, g);
  return g;
}

std::vector<double> quadrature_pu(cplx r, cplx soft_mean, double eff_var, double phase_mean,
                                  double phase_var, const Constellation& c, double sigma2,
                                  int points) {
  const double half_width = 6.0 * std::sqrt(phase_var);
  const double h = 2.0 * half_width / (points - 1);
  std::vector<double> logs(c.size());
  std::vector<double> terms(static_cast<std::size_t>(points));
  for (std::size_t j = 0; j < c.size(); ++j) {
    const cplx s = c.point(j);
    for (int t = 0; t < points; ++t) {
      const double dth = -half_width + h * t;
      const cplx rot = std::polar(1.0, -(phase_mean + dth));
      const double log_lik = (r * std::conj(s) * rot).real() / sigma2 - std::norm(s) / (2.0 * sigma2);
      const double log_pd = (r * std::conj(soft_mean) * rot).real() / eff_var;
      const double log_app = -0.5 * dth * dth / phase_var;
      terms[static_cast<std::size_t>(t)] = log_lik - log_pd + log_app;
    }
    const double top = *std::max_element(terms.begin(), terms.end());
    double acc = 0.0;
    for (int t = 0; t < points; ++t) {
      const double w = (t == 0 || t == points - 1) ? 0.5 : 1.0;
      acc += w * std::exp(terms[static_cast<std::size_t>(t)] - top);
    }
    logs[j] = top + std::log(acc * h);
  }
  return from_logs(logs);
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
  Matrix j = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    j(i, i - 1) = j(i - 1, i) = std::sqrt(static_cast<double>(i));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(j);
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = v * v;
  }
}

std::vector<double> quadrature_g(cplx r, double phase_mean, double phase_var,
                                 const Constellation& c, double sigma2, int nodes) {
  std::vector<double> x;
  std::vector<double> w;
  gauss_hermite(nodes, x, w);
  const double sd = std::sqrt(phase_var);
  std::vector<double> logs(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    double e = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      e += w[t] * std::norm(r - c.point(j) * std::polar(1.0, phase_mean + sd * x[t]));
    }
    logs[j] = -e / (2.0 * sigma2);
  }
  return from_logs(logs);
}

std::vector<Bits> all_codewords(const LdpcCode& code) {
  const int k = code.info_length();
  if (k > 24) throw UnsupportedDimension("exhaustive enumeration needs k <= 24");
  std::vector<Bits> out;
  out.reserve(std::size_t{1} << k);
  Bits info(static_cast<std::size_t>(k));
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
    for (int b = 0; b < k; ++b) info[static_cast<std::size_t>(b)] = (m >> b) & 1U;
    out.push_back(code.encode(info));
  }
  return out;
}

Bits ml_decode(const LdpcCode& code, std::span<const double> llr) {
  if (static_cast<int>(llr.size()) != code.length()) {
    throw DimensionMismatch("ml_decode: LLR count differs from code length");
  }
  Bits best;
  double best_cost = 0.0;
  for (const Bits& word : all_codewords(code)) {
    // -log P(word) up to a constant: sum of L over positions set to 1
    double cost = 0.0;
    for (std::size_t t = 0; t < word.size(); ++t) {
      if (word[t]) cost += llr[t];
    }
    if (best.empty() || cost < best_cost) {
      best = word;
      best_cost = cost;
    }
  }
  return best;
}

PmfMoments brute_moments(std::span<const double> pmf, const Constellation& c) {
  PmfMoments m;
  for (std::size_t j = 0; j < c.size(); ++j) m.mean += pmf[j] * c.point(j);
  for (std::size_t j = 0; j < c.size(); ++j) m.variance += pmf[j] * std::norm(c.point(j) - m.mean);
  return m;
}

std::vector<double> set_partition_llr(std::span<const double> pmf, const Constellation& c) {
  const int bits = c.bits_per_symbol();
  std::vector<double> out(static_cast<std::size_t>(bits));
  for (int j = 0; j < bits; ++j) {
    std::vector<std::size_t> zero_set;
    std::vector<std::size_t> one_set;
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
      ((c.label(idx) >> (bits - 1 - j)) & 1U ? one_set : zero_set).push_back(idx);
    }
    double p0 = 0.0;
    double p1 = 0.0;
    for (auto idx : zero_set) p0 += pmf[idx];
    for (auto idx : one_set) p1 += pmf[idx];
    out[static_cast<std::size_t>(j)] = std::log(p0) - std::log(p1);
  }
  return out;
}

std::vector<double> enumerate_product_pmf(std::span<const double> llrs, const Constellation& c) {
  const int bits = c.bits_per_symbol();
  std::vector<double> out(c.size(), 0.0);
  for (std::uint32_t pattern = 0; pattern < (1U << bits); ++pattern) {
    double p = 1.0;
    for (int j = 0; j < bits; ++j) {
      const int bit = (pattern >> (bits - 1 - j)) & 1U;
      const double l = llrs[static_cast<std::size_t>(j)];
      const double p0 = 1.0 / (1.0 + std::exp(-l));
      p *= bit ? 1.0 - p0 : p0;
    }
    out[c.index_of_label(pattern)] = p;
  }
  return out;
}

TextbookEkfOutput textbook_ekf(const ComplexGrid& r, const SoftSymbolStats& stats,
                               const CovarianceSpec& cov, const Vector& mean0, const Matrix& cov0) {
  const int d = r.channels();
  const int n = r.length();
  TextbookEkfOutput out;
  out.mean.push_back(mean0);
  out.cov.push_back(cov0);
  out.predicted.push_back(Matrix::Zero(d, d));
  for (int k = 1; k < n; ++k) {
    const Vector xp = out.mean.back();
    const Matrix pp = out.cov.back() + cov.q.matrix();
    // stacked [Re; Im] measurement per channel
    Matrix hj = Matrix::Zero(2 * d, d);
    Matrix rr = Matrix::Zero(2 * d, 2 * d);
    Vector innov(2 * d);
    for (int i = 0; i < d; ++i) {
      const cplx pred = stats.mean(i, k) * std::polar(1.0, xp(i));
      hj(2 * i, i) = -pred.imag();
      hj(2 * i + 1, i) = pred.real();
      rr(2 * i, 2 * i) = rr(2 * i + 1, 2 * i + 1) = stats.eff_var(i, k);
      innov(2 * i) = r(i, k).real() - pred.real();
      innov(2 * i + 1) = r(i, k).imag() - pred.imag();
    }
    const Matrix s = hj * pp * hj.transpose() + rr;
    const Matrix gain = pp * hj.transpose() * s.inverse();
    out.mean.push_back(xp + gain * innov);
    const Matrix m = (Matrix::Identity(d, d) - gain * hj) * pp;
    out.cov.push_back(0.5 * (m + m.transpose()));
    out.predicted.push_back(pp);
  }
  return out;
}

TextbookEkfOutput textbook_rts(const TextbookEkfOutput& filtered, const CovarianceSpec& cov) {
  const std::size_t n = filtered.mean.size();
  TextbookEkfOutput out = filtered;
  for (std::size_t kk = n - 1; kk-- > 0;) {
    const Matrix pred = filtered.cov[kk] + cov.q.matrix();
    const Matrix a = filtered.cov[kk] * pred.inverse();
    out.mean[kk] = filtered.mean[kk] + a * (out.mean[kk + 1] - filtered.mean[kk]);
    out.cov[kk] = filtered.cov[kk] + a * (out.cov[kk + 1] - pred) * a.transpose();
  }
  return out;
}

Matrix cofactor_inverse(const Matrix& a) {
  const Eigen::Index n = a.rows();
  auto minor = [](const Matrix& m, Eigen::Index row, Eigen::Index col) {
    const Eigen::Index k = m.rows();
    Matrix out(k - 1, k - 1);
    for (Eigen::Index i = 0, oi = 0; i < k; ++i) {
      if (i == row) continue;
      for (Eigen::Index j = 0, oj = 0; j < k; ++j) {
        if (j == col) continue;
        out(oi, oj++) = m(i, j);
      }
      ++oi;
    }
    return out;
  };
  std::function<double(const Matrix&)> det = [&](const Matrix& m) -> double {
    if (m.rows() == 1) return m(0, 0);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      acc += ((j % 2) ? -1.0 : 1.0) * m(0, j) * det(minor(m, 0, j));
    }
    return acc;
  };
  const double full = det(a);
  if (n == 1) return Matrix::Constant(1, 1, 1.0 / full);
  Matrix inv(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      inv(j, i) = (((i + j) % 2) ? -1.0 : 1.0) * det(minor(a, i, j)) / full;
    }
  }
  return inv;
}

}  // namespace pnc::oracle
