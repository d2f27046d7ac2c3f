#include "helpers.hpp"
#include "oracles.hpp"
#include "pnc/error.hpp"
#include "pnc/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pnc;
using pnc::testing::max_abs_diff;
using pnc::testing::random_spd;

namespace {

// I0 by its power series in long double, summed until the terms vanish.
long double bessel_i0_series(long double x) {
  long double term = 1.0L;
  long double sum = 1.0L;
  const long double q = x * x / 4.0L;
  for (int m = 1; m < 400; ++m) {
    term *= q / (static_cast<long double>(m) * m);
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("spd_solve: identity and diagonal") {
  Rng rng(3);
  const Matrix b = Matrix::Random(3, 4);
  CHECK(max_abs_diff(spd_solve(SymMatrix::identity(3), b), b) == 0.0);

  Vector d(2);
  d << 2.0, 4.0;
  const Matrix x = spd_solve(SymMatrix::diagonal(d), Matrix::Identity(2, 2));
  CHECK(x(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x(1, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(x(0, 1) == 0.0);
}

TEST_CASE("spd_solve: random 5x5 against the cofactor inverse") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix a = random_spd(5, rng);
    const Matrix x = spd_solve(SymMatrix(a), Matrix::Identity(5, 5));
    CHECK(max_abs_diff(x, oracle::cofactor_inverse(a)) < 1e-10);
  }
}

TEST_CASE("spd_solve: A * solve(A, I) = I up to dimension 32" * doctest::test_suite("invariants")) {
  Rng rng(5);
  for (int dim = 1; dim <= 32; ++dim) {
    const Matrix a = random_spd(dim, rng, 0.1);
    const Matrix x = spd_solve(a, Matrix::Identity(dim, dim));
    CHECK(max_abs_diff(a * x, Matrix::Identity(dim, dim)) < 1e-9);
  }
}

TEST_CASE("spd_solve: relative residual" * doctest::test_suite("invariants")) {
  Rng rng(8);
  const Matrix a = random_spd(12, rng, 1e-3);
  const Matrix b = Matrix::Random(12, 3);
  const Matrix x = spd_solve(a, b);
  CHECK((a * x - b).norm() / b.norm() < 1e-10);
}

TEST_CASE("spd_solve: jitter rescues a singular PSD matrix, indefinite throws") {
  Matrix rank1(2, 2);
  rank1 << 1.0, 1.0, 1.0, 1.0;
  CHECK_NOTHROW(spd_solve(rank1, Matrix::Identity(2, 2)));

  Matrix indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(spd_solve(indefinite, Matrix::Identity(2, 2)), NotPositiveDefinite);
  CHECK_THROWS_AS(spd_solve(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), DimensionMismatch);
}

TEST_CASE("SymMatrix rejects asymmetric input and negative diagonals") {
  Matrix m(2, 2);
  m << 1.0, 0.5, 0.4, 1.0;
  CHECK_THROWS_AS(SymMatrix{m}, InvalidMatrix);
  m << -1.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(SymMatrix{m}, InvalidMatrix);
  m << 1.0, 0.3, 0.3 * (1 + 1e-14), 2.0;
  const SymMatrix s(m);
  CHECK(s(0, 1) == s(1, 0));
}

TEST_CASE("log_bessel_i0: examples") {
  CHECK(log_bessel_i0(0.0) == 0.0);
  CHECK(log_bessel_i0(1.0) == doctest::Approx(0.2359143585).epsilon(1e-10));
  const double lead = 50.0 - 0.5 * std::log(2.0 * std::numbers::pi * 50.0);
  CHECK(std::abs(log_bessel_i0(50.0) - lead) / lead < 0.01);
  CHECK(log_bessel_i0_leading(50.0) == doctest::Approx(lead).epsilon(1e-15));
}

TEST_CASE("log_bessel_i0 agrees with the long-double series on [0, 80]") {
  for (double x = 0.0; x <= 80.0; x += 0.37) {
    const double want = static_cast<double>(std::log(bessel_i0_series(x)));
    CHECK(std::abs(log_bessel_i0(x) - want) <= 1e-12 * std::max(1.0, want));
  }
  // both sides of the branch switch
  for (double x : {19.999999, 20.0, 20.000001}) {
    const double want = static_cast<double>(std::log(bessel_i0_series(x)));
    CHECK(std::abs(log_bessel_i0(x) - want) < 1e-10);
  }
}

TEST_CASE("log_bessel_i0 is increasing and convex" * doctest::test_suite("invariants")) {
  const double h = 0.05;
  for (double x = h; x < 200.0; x += h) {
    const double a = log_bessel_i0(x - h);
    const double b = log_bessel_i0(x);
    const double c = log_bessel_i0(x + h);
    CHECK(b > a);
    CHECK(a + c - 2.0 * b >= -1e-11);
  }
}

TEST_CASE("gaussian_logpdf: scalar examples") {
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  Vector x(1), m(1);
  x << 0.0;
  m << 0.0;
  CHECK(gaussian_logpdf(x, m, SymMatrix::identity(1)) == doctest::Approx(-half_log_2pi).epsilon(1e-15));
  x << 1.0;
  CHECK(gaussian_logpdf(x, m, SymMatrix::identity(1)) ==
        doctest::Approx(-0.5 - half_log_2pi).epsilon(1e-15));
}

TEST_CASE("gaussian_logpdf: random 3-dim case against a direct formula") {
  Rng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix c = random_spd(3, rng);
    const Vector x = Vector::Random(3);
    const Vector m = Vector::Random(3);
    const Matrix inv = oracle::cofactor_inverse(c);
    const double det = c.determinant();
    const double direct = -0.5 * (x - m).dot(inv * (x - m)) - 1.5 * std::log(2.0 * std::numbers::pi) -
                          0.5 * std::log(det);
    CHECK(std::abs(gaussian_logpdf(x, m, SymMatrix(c)) - direct) < 1e-8);
  }
}

TEST_CASE("gaussian_logpdf integrates to one (dim 1 and 2)" * doctest::test_suite("invariants")) {
  Vector m1(1);
  m1 << 0.3;
  Matrix c1(1, 1);
  c1 << 0.7;
  double acc = 0.0;
  const double h = 0.01;
  for (double t = -10.0; t <= 10.0; t += h) {
    Vector x(1);
    x << t;
    acc += std::exp(gaussian_logpdf(x, m1, SymMatrix(c1))) * h;
  }
  CHECK(std::abs(acc - 1.0) < 1e-4);

  Vector m2(2);
  m2 << -0.2, 0.1;
  Matrix c2(2, 2);
  c2 << 0.5, 0.2, 0.2, 0.4;
  acc = 0.0;
  const double h2 = 0.02;
  for (double a = -6.0; a <= 6.0; a += h2) {
    for (double b = -6.0; b <= 6.0; b += h2) {
      Vector x(2);
      x << a, b;
      acc += std::exp(gaussian_logpdf(x, m2, SymMatrix(c2))) * h2 * h2;
    }
  }
  CHECK(std::abs(acc - 1.0) < 1e-4);
}

TEST_CASE("gaussian_logpdf errors") {
  Vector x(2), m(3);
  x.setZero();
  m.setZero();
  CHECK_THROWS_AS(gaussian_logpdf(x, m, SymMatrix::identity(2)), DimensionMismatch);
  Matrix bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(gaussian_logpdf(x, x, SymMatrix(bad)), NotPositiveDefinite);
}

TEST_CASE("wrap_angle maps into (-pi, pi]" * doctest::test_suite("invariants")) {
  const double pi = std::numbers::pi;
  CHECK(wrap_angle(pi) == doctest::Approx(pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3.0 * pi / 2.0) == doctest::Approx(-pi / 2.0));
  for (double a = -50.0; a < 50.0; a += 0.731) {
    const double w = wrap_angle(a);
    CHECK(w > -pi);
    CHECK(w <= pi);
    CHECK(std::abs(std::remainder(a - w, 2.0 * pi)) < 1e-12);
  }
}
