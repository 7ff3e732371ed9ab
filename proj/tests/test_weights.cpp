#include <doctest.h>

#include <cmath>
#include <random>

#include "empgram/error.hpp"
#include "empgram/weights.hpp"

using namespace empgram;

TEST_CASE("time weight factors") {
  CHECK(time_weight_factor(Weighting::none, 3.0, 0.1) == 1.0);
  CHECK(time_weight_factor(Weighting::time_linear, 3.0, 0.1) == 3.0);
  CHECK(time_weight_factor(Weighting::time_quadratic, 3.0, 0.1) == 4.5);
  CHECK(time_weight_factor(Weighting::time_reciprocal, 1.0 / M_PI, 0.1) == doctest::Approx(1.0));
  CHECK(time_weight_factor(Weighting::time_reciprocal, 0.0, 0.5) == doctest::Approx(1.1283791670955126));
  CHECK_THROWS_AS(time_weight_factor(Weighting::time_linear, -1.0, 0.1), DomainError);
  CHECK_THROWS_AS(time_weight_factor(Weighting::time_reciprocal, 0.0, 0.0), DomainError);
}

TEST_CASE("quadrature weights") {
  const TimeGrid g(0.5, 2.0);
  const Vector q = quadrature_weights(Weighting::time_linear, g);
  REQUIRE(q.size() == 5);
  CHECK(q[0] == 0.0);
  CHECK(q[1] == 0.0);
  CHECK(q[2] == doctest::Approx(0.25));
  CHECK(q[4] == doctest::Approx(0.75));
  const Vector n = quadrature_weights(Weighting::none, g);
  CHECK(n == Vector{0.0, 0.5, 0.5, 0.5, 0.5});
  CHECK(quadrature_weights(Weighting::row, g) == n);
}

TEST_CASE("closed-form integrals behind the weighted scalar Gramian") {
  // int_0^inf t^r e^{2at} / r! dt = (-2a)^-(r+1) and
  // int_0^inf (pi t)^-1/2 e^{2at} dt = (-2a)^-1/2, all 1 at a = -1/2.
  const double a = -0.5;
  for (int r = 0; r <= 2; ++r) {
    double s = 0.0;
    const double h = 1e-3;
    for (int k = 0; k < 80000; ++k) {
      const double t = (k + 0.5) * h;
      s += std::pow(t, r) / std::tgamma(r + 1.0) * std::exp(2 * a * t) * h;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
  }
  // Substitute t = s^2 to remove the singularity.
  double s = 0.0;
  const double h = 1e-4;
  for (int k = 0; k < 100000; ++k) {
    const double u = (k + 0.5) * h;
    s += 2.0 / std::sqrt(M_PI) * std::exp(2 * a * u * u) * h;
  }
  CHECK(s == doctest::Approx(0.99999999977).epsilon(1e-9));
}

TEST_CASE("row and column normalisation") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Matrix m(4, 30);
  for (double& v : m.data()) v = 5.0 * nd(rng);
  for (double& v : m.row(2)) v = 0.0;
  Matrix r = m;
  normalize_rows_in_place(r);
  for (std::size_t i = 0; i < 4; ++i) {
    double mx = 0.0;
    for (double v : r.row(i)) mx = std::max(mx, std::abs(v));
    CHECK(mx == (i == 2 ? 0.0 : 1.0));
  }
  Matrix c = m;
  for (std::size_t i = 0; i < 4; ++i) c(i, 7) = 0.0;
  normalize_columns_in_place(c);
  for (std::size_t k = 0; k < c.cols(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += c(i, k) * c(i, k);
    CHECK(std::sqrt(s) == doctest::Approx(k == 7 ? 0.0 : 1.0).epsilon(1e-12));
  }
  Matrix untouched = m;
  apply_normalization(Weighting::time_linear, untouched);
  CHECK(untouched == m);
}

TEST_CASE("weighting names") {
  for (auto n : weighting_names()) CHECK(to_string(parse_weighting(n)) == n);
  CHECK_THROWS_AS(parse_weighting("cubic"), ConfigError);
}
