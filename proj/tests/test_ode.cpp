#include <doctest.h>

#include <cmath>

#include "empgram/error.hpp"
#include "empgram/model.hpp"
#include "empgram/ode.hpp"

using namespace empgram;

namespace {

Model decay() {
  return make_lti_model(LtiSystem{{{-1.0}}, {{0.0}}, {{1.0}}});
}

double rk4_error(double h) {
  const Trajectory tr = integrate(decay(), Vector{1.0}, Vector{}, InputDrive::zero(1), TimeGrid(h, 1.0), SampleKind::state);
  return std::abs(tr.samples(0, tr.samples.cols() - 1) - std::exp(-1.0));
}

}  // namespace

TEST_CASE("time grid") {
  const TimeGrid g(0.1, 1.0);
  CHECK(g.steps() == 10);
  CHECK(g.samples() == 11);
  CHECK(g.time(10) == doctest::Approx(1.0));
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(TimeGrid(0.1, -1.0), ConfigError);
  CHECK_THROWS_AS(TimeGrid(1.0, 1.0), ConfigError);
}

TEST_CASE("RK4 accuracy and order") {
  CHECK(rk4_error(0.01) < 1e-8);
  // Frozen reference errors for x' = -x, T = 1.
  CHECK(rk4_error(0.1) == doctest::Approx(3.33e-7).epsilon(0.01));
  const double r1 = rk4_error(0.1) / rk4_error(0.05);
  const double r2 = rk4_error(0.05) / rk4_error(0.025);
  CHECK(r1 >= 14.0);
  CHECK(r1 <= 18.0);
  CHECK(r2 >= 14.0);
  CHECK(r2 <= 18.0);
}

TEST_CASE("trivial dynamics") {
  const Model zero = make_lti_model(LtiSystem{{{0.0}}, {{1.0}}, {{1.0}}});
  const Trajectory c = integrate(zero, Vector{0.7}, Vector{}, InputDrive::zero(1), TimeGrid(0.01, 1.0), SampleKind::state);
  for (double v : c.samples.row(0)) CHECK(v == 0.7);

  const InputDrive step{make_input(InputKind::step, {}), Vector{1.0}, Vector{0.0}};
  const Trajectory r = integrate(zero, Vector{0.0}, Vector{}, step, TimeGrid(0.01, 1.0), SampleKind::state);
  CHECK(r.samples(0, 100) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("LTI output trajectory is C times the state trajectory") {
  const LtiSystem s{{{-1, 0.5}, {0, -2}}, {{1}, {1}}, {{1, 2}, {3, -1}}};
  const Model m = make_lti_model(s);
  const InputDrive drive{make_input(InputKind::sinc, InputParams{0.05, 2.0, 1, 0.0}), Vector{1.0}, Vector{0.0}};
  const TimeGrid g(0.05, 2.0);
  const Trajectory x = integrate(m, Vector{1, -1}, Vector{}, drive, g, SampleKind::state);
  const Trajectory y = integrate(m, Vector{1, -1}, Vector{}, drive, g, SampleKind::output);
  CHECK(y.samples == s.C * x.samples);
}

TEST_CASE("impulse response carries the whole unit area in the first step") {
  const Model m = make_lti_model(LtiSystem{{{0.0}}, {{1.0}}, {{1.0}}});
  const InputDrive imp{make_input(InputKind::impulse, InputParams{0.01, 1.0, 1, 0.0}), Vector{1.0}, Vector{0.0}};
  const Trajectory r = integrate(m, Vector{0.0}, Vector{}, imp, TimeGrid(0.01, 1.0), SampleKind::state);
  CHECK(r.samples(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.samples(0, 100) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("divergence reports the step") {
  const Model blow("blow", Dimensions{1, 1, 1, 0},
                   [](double, VectorView x, VectorView, VectorView, std::span<double> dx) { dx[0] = x[0] * x[0]; },
                   [](double, VectorView x, VectorView, VectorView, std::span<double> y) { y[0] = x[0]; },
                   [](VectorView) { return Vector{1.0}; });
  try {
    integrate(blow, Vector{1.0}, Vector{}, InputDrive::zero(1), TimeGrid(0.1, 10.0), SampleKind::state);
    FAIL("no divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() > 0);
    CHECK(e.step() <= 100);
  }
  CHECK_THROWS_AS(integrate(blow, Vector{1.0, 2.0}, Vector{}, InputDrive::zero(1), TimeGrid(0.1, 1.0), SampleKind::state),
                  ConfigError);
}

TEST_CASE("initial-state hook") {
  const Model m = builtin_jakstat();
  Vector nominal(23, 1.0);
  nominal[22] = 0.34;
  const SolverHook hook = default_hook_for_initial_state_params(m, nominal);
  Vector p = nominal;
  p[22] = 0.44;
  const Vector x0 = m.initial_state(nominal);
  CHECK(hook(m, x0, p).state[1] == doctest::Approx(0.44));
  CHECK(hook(m, x0, p).params == p);

  // Perturbations of parameter-free components are kept.
  Vector xd = x0;
  xd[4] += 0.25;
  CHECK(hook(m, xd, p).state[4] == doctest::Approx(0.25));
  // A parameter-set component follows the parameter, as in a solver wrapper
  // that writes the parameter into x0.
  xd[1] += 0.25;
  CHECK(hook(m, xd, nominal).state[1] == doctest::Approx(0.34));

  const Model lti = builtin_model("scalar");
  const SolverHook id = default_hook_for_initial_state_params(lti, Vector{});
  CHECK(id(lti, Vector{0.3}, Vector{}).state == Vector{0.3});
}
