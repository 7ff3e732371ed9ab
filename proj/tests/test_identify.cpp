#include <doctest.h>

#include <cmath>

#include "empgram/error.hpp"
#include "empgram/identify.hpp"

using namespace empgram;

TEST_CASE("tail contributions on a diagonal Gramian") {
  const IdentifiabilityReport r = analyze_identifiability(Matrix::diagonal(Vector{5, 1e-12, 3, 0}), 2);
  CHECK(r.singular_values == Vector{5, 3, 1e-12, 0});
  CHECK(r.u_bar == Vector{0, 1, 0, 1});
  CHECK(r.relative == Vector{0, 1, 0, 1});
  CHECK(r.ranking == std::vector<std::size_t>{1, 3, 0, 2});
  CHECK(r.identifiable == std::vector<std::size_t>{0, 2});
}

TEST_CASE("coupled unidentifiable pair") {
  // theta1 and theta2 only enter as a sum: the null direction is (1, -1) / sqrt 2.
  const Matrix w{{1, 1, 0}, {1, 1, 0}, {0, 0, 4}};
  const IdentifiabilityReport r = analyze_identifiability(w, 1);
  CHECK(r.u_bar[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(r.u_bar[1] == doctest::Approx(std::sqrt(0.5)));
  CHECK(r.relative[2] < 1e-7);
  CHECK(r.identifiable == std::vector<std::size_t>{2});
}

TEST_CASE("spectral gap chooses the tail") {
  CHECK(tail_from_spectral_gap(Vector{10, 9, 8, 1e-9, 1e-10}) == 2);
  CHECK(tail_from_spectral_gap(Vector{10, 1e-3, 1e-4}) == 2);
  const IdentifiabilityReport r = analyze_identifiability(Matrix::diagonal(Vector{1, 2, 3, 1e-14}));
  CHECK(r.tail_size == 1);
  CHECK(r.ranking.front() == 3);
}

TEST_CASE("invalid tails") {
  const Matrix w = Matrix::identity(3);
  CHECK_THROWS_AS(analyze_identifiability(w, 0), ConfigError);
  CHECK_THROWS_AS(analyze_identifiability(w, 3), ConfigError);
  CHECK_THROWS_AS(analyze_identifiability(Matrix{{1}}), ConfigError);
}

TEST_CASE("reparametrisation basis") {
  const IdentifiabilityReport r = analyze_identifiability(Matrix::diagonal(Vector{1, 4, 2}), 1);
  const Matrix b = reparametrization_basis(r, 2);
  CHECK(b == Matrix{{0, 0}, {1, 0}, {0, 1}});
  CHECK_THROWS_AS(reparametrization_basis(r, 4), ConfigError);
}
