#include <doctest.h>

#include "empgram/error.hpp"
#include "empgram/model.hpp"

using namespace empgram;

TEST_CASE("JAK/STAT dimensions and initial state") {
  const Model m = builtin_jakstat();
  CHECK(m.dims().inputs == 1);
  CHECK(m.dims().states == 10);
  CHECK(m.dims().outputs == 8);
  CHECK(m.dims().params == 23);
  Vector th(23, 1.0);
  th[22] = 2.8;
  CHECK(m.initial_state(th) == Vector{1.3, 2.8, 0, 0, 0, 2.8, 165, 0, 0.34, 0});
}

TEST_CASE("JAK/STAT vector field at the initial state") {
  const Model m = builtin_jakstat();
  Vector th(23);
  for (std::size_t k = 0; k < th.size(); ++k) th[k] = 0.5 + 0.1 * static_cast<double>(k);
  const Vector x0 = m.initial_state(th);
  const Vector dx = m.eval_dynamics(0.0, x0, Vector{0.0}, th);
  CHECK(dx[1] == doctest::Approx(th[4] * 1.3 - th[5] * th[22]));
  CHECK(dx[3] == 0.0);
  CHECK(dx[4] == 0.0);
  CHECK(dx[7] == 0.0);
  CHECK(dx[9] == 0.0);
  // Stimulation moves x1 into x3 at rate c1 * theta1.
  const Vector du = m.eval_dynamics(0.0, x0, Vector{1.0}, th);
  CHECK(du[2] - dx[2] == doctest::Approx(jakstat::c1 * th[0] * 1.3));
  CHECK(du[0] - dx[0] == doctest::Approx(-jakstat::c1 * th[0] * 1.3));
}

TEST_CASE("JAK/STAT outputs") {
  const Model m = builtin_jakstat();
  Vector th(23, 1.0);
  th[16] = 2.0;  // theta17
  th[21] = 3.0;  // theta22
  th[10] = 4.0;  // theta11
  Vector x(10);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i + 1);
  const Vector y = m.eval_output(0.0, x, Vector{0.0}, th);
  CHECK(y[0] == 1 + 3 + 4);
  CHECK(y[1] == doctest::Approx(3 + 4 + 5 + 0.34 - 9));
  CHECK(y[3] == doctest::Approx(2.8 - 6));
  CHECK(y[5] == doctest::Approx(2.0 * 3.0 / 4.0 * 8));
  CHECK(y[7] == doctest::Approx(165 - 7));
}

TEST_CASE("model evaluation checks") {
  const Model m = builtin_model("scalar");
  CHECK_THROWS_AS(m.eval_dynamics(0.0, Vector{1, 2}, Vector{0}, Vector{}), ConfigError);
  CHECK_THROWS_AS(builtin_model("nope"), ConfigError);
  const Model bad("bad", Dimensions{1, 1, 1, 0},
                  [](double, VectorView, VectorView, VectorView, std::span<double> dx) { dx[0] = 1.0 / 0.0; },
                  [](double, VectorView x, VectorView, VectorView, std::span<double> y) { y[0] = x[0]; },
                  [](VectorView) { return Vector{0.0}; });
  CHECK_THROWS_AS(bad.eval_dynamics(0.0, Vector{0.0}, Vector{0.0}, Vector{}), DivergenceError);
}

TEST_CASE("summed output model") {
  const Model m = make_lti_model(LtiSystem{{{-1, 0}, {0, -2}}, {{1}, {1}}, {{1, 0}, {0, 3}}});
  const Model s = m.with_summed_output();
  CHECK(s.dims().outputs == 1);
  CHECK(s.eval_output(0.0, Vector{2, 5}, Vector{0}, Vector{}) == Vector{17.0});
}

TEST_CASE("LTI text format") {
  const LtiSystem s = parse_lti("A\n-1 0\n0 -2\n\nB\n1\n0\n\nC\n1 1\n");
  CHECK(s.A == Matrix{{-1, 0}, {0, -2}});
  CHECK(s.C == Matrix{{1, 1}});
  CHECK_THROWS_AS(parse_lti("A\n-1 0\n0 -2\n\nB\n1\n\nC\n1 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_lti("A\n-1\n"), ParseError);
  const Model m = load_lti("A\n-1\n\nB\n1\n\nC\n2\n", "one");
  CHECK(m.name() == "one");
  CHECK(m.lti().has_value());
}
