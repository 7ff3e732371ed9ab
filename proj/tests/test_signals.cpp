#include <doctest.h>

#include <cmath>

#include "empgram/error.hpp"
#include "empgram/signals.hpp"

using namespace empgram;

TEST_CASE("impulse is a unit-area rectangle") {
  const InputFunction u = make_input(InputKind::impulse, InputParams{0.1, 1.0, 1, 0.0});
  CHECK(u(0.05) == doctest::Approx(10.0));
  CHECK(u(0.2) == 0.0);
  double area = 0.0;
  for (int k = 0; k <= 10; ++k) area += u(0.1 * k) * 0.1;
  CHECK(area == doctest::Approx(1.0));
}

TEST_CASE("step and sinc") {
  const InputFunction s = make_input(InputKind::step, InputParams{});
  CHECK(s(0.0) == 1.0);
  CHECK(s(123.0) == 1.0);
  const InputFunction c = make_input(InputKind::sinc, InputParams{0.1, 1.0, 1, 0.0});
  CHECK(c(0.0) == 1.0);
  CHECK(c(0.1 * M_PI) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c(0.05) == doctest::Approx(std::sin(0.5) / 0.5));
}

TEST_CASE("chirp decays and prbs is a seeded binary sequence") {
  const InputFunction ch = make_input(InputKind::chirp, InputParams{0.01, 10.0, 1, 0.0});
  CHECK(ch(0.0) == doctest::Approx(1.0));
  CHECK(std::abs(ch(9.0)) <= std::exp(-0.9) + 1e-12);
  const InputFunction a = make_input(InputKind::prbs, InputParams{0.01, 10.0, 7, 0.0});
  const InputFunction b = make_input(InputKind::prbs, InputParams{0.01, 10.0, 7, 0.0});
  const InputFunction c = make_input(InputKind::prbs, InputParams{0.01, 10.0, 8, 0.0});
  int ones = 0;
  bool differs = false;
  for (int k = 0; k < 1000; ++k) {
    const double t = 0.01 * k;
    CHECK((a(t) == 0.0 || a(t) == 1.0));
    CHECK(a(t) == b(t));
    differs |= a(t) != c(t);
    ones += a(t) == 1.0;
  }
  CHECK(differs);
  CHECK(ones > 200);
  CHECK(ones < 800);
}

TEST_CASE("input names and validation") {
  for (auto n : input_kind_names()) CHECK(to_string(parse_input_kind(n)) == n);
  CHECK_THROWS_AS(parse_input_kind("ramp"), ConfigError);
  CHECK_THROWS_AS(make_input(InputKind::impulse, InputParams{0.0, 1.0, 1, 0.0}), ConfigError);
  CHECK_THROWS_AS(make_input(InputKind::sinc, InputParams{-1.0, 1.0, 1, 0.0}), ConfigError);
  const InputFunction f = InputFunction::custom([](double t) { return 2 * t; });
  CHECK(f.kind() == InputKind::custom);
  CHECK(f(3.0) == 6.0);
}
