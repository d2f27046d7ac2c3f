#pragma once

// Slow reference implementations for the test suites. Nothing here is used by
// the receivers themselves.

#include "pnc/eks.hpp"
#include "pnc/ldpc.hpp"
#include "pnc/model.hpp"
#include "pnc/symbol_pmf.hpp"

#include <span>
#include <vector>

namespace pnc::oracle {

/// Discretized phase density on [-pi, pi).
struct PhaseGrid {
  int num_points = 0;
  double lo = 0.0;
  double step = 0.0;
  std::vector<double> prob;

  explicit PhaseGrid(int points);
  double angle(int idx) const { return lo + step * idx; }
};

struct GridPosterior {
  std::vector<double> mean;      // circular mean
  std::vector<double> variance;  // linear variance about the circular mean
};

/// Forward-backward recursion on a wrapped grid with the exact Gaussian
/// likelihood and a wrapped Gaussian random-walk kernel. Flat prior at k=0.
GridPosterior grid_bayes_smoother(std::span<const cplx> r, std::span<const cplx> s, double q,
                                  double sigma2, int num_points = 2048);
/// D must be 1.
GridPosterior grid_bayes_smoother(const ComplexGrid& r, const ComplexGrid& s, const SymMatrix& q,
                                  double sigma2, int num_points = 2048);
/// Filtering densities only (no backward pass).
GridPosterior grid_bayes_filter(std::span<const cplx> r, std::span<const cplx> s, double q,
                                double sigma2, int num_points = 2048);

/// Single-slot posterior density with a flat prior, returned on the grid.
PhaseGrid grid_single_observation(cplx r, cplx s, double sigma2, int num_points = 2048);

/// Symbol message by trapezoid quadrature of
///   int p(r | s, theta) p_app(theta) / p_d(theta) dtheta
/// over theta_hat +- 6 sqrt(M), with a Gaussian p_app and the Gaussian
/// projected symbol message p_d.
std::vector<double> quadrature_pu(cplx r, cplx soft_mean, double eff_var, double phase_mean,
                                  double phase_var, const Constellation& c, double sigma2,
                                  int points = 4096);

/// exp(-E|r - s e^{j Theta}|^2 / (2 sigma2)) with the expectation taken by
/// Gauss-Hermite quadrature over Theta ~ N(phase_mean, phase_var).
std::vector<double> quadrature_g(cplx r, double phase_mean, double phase_var,
                                 const Constellation& c, double sigma2, int nodes = 64);

/// Gauss-Hermite nodes and weights for the standard normal (probabilists').
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Exhaustive ML decoding over all 2^k codewords (k <= 24).
Bits ml_decode(const LdpcCode& code, std::span<const double> llr);

/// Every codeword of a small code.
std::vector<Bits> all_codewords(const LdpcCode& code);

/// Moments of a PMF by direct summation.
PmfMoments brute_moments(std::span<const double> pmf, const Constellation& c);

/// Bit LLRs by enumerating the two label subsets of each bit position.
std::vector<double> set_partition_llr(std::span<const double> pmf, const Constellation& c);

/// Product PMF by enumerating every bit pattern in {0,1}^Rm.
std::vector<double> enumerate_product_pmf(std::span<const double> llrs, const Constellation& c);

struct TextbookEkfOutput {
  std::vector<Vector> mean;
  std::vector<Matrix> cov;
  std::vector<Matrix> predicted;
};

/// EKF with the 2D real measurement of each channel and the Kalman-gain
/// update, started from a given posterior at k = 0.
TextbookEkfOutput textbook_ekf(const ComplexGrid& r, const SoftSymbolStats& stats,
                               const CovarianceSpec& cov, const Vector& mean0, const Matrix& cov0);

/// Fixed-interval RTS smoother using explicit matrix inverses.
TextbookEkfOutput textbook_rts(const TextbookEkfOutput& filtered, const CovarianceSpec& cov);

/// Matrix inverse by cofactor expansion (tiny matrices only).
Matrix cofactor_inverse(const Matrix& a);

}  // namespace pnc::oracle
