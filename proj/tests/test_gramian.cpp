#include <doctest.h>

#include <random>

#include "empgram/error.hpp"
#include "empgram/gramian.hpp"
#include "oracles.hpp"

using namespace empgram;

namespace {

const InputFunction impulse_01 = make_input(InputKind::impulse, InputParams{0.01, 40.0, 1, 0.0});

Model lti(std::initializer_list<std::initializer_list<double>> a, std::initializer_list<std::initializer_list<double>> b,
          std::initializer_list<std::initializer_list<double>> c) {
  return make_lti_model(LtiSystem{Matrix(a), Matrix(b), Matrix(c)});
}

Model theta_input() {
  // x' = -x + theta u, y = x
  return Model("theta-input", Dimensions{1, 1, 1, 1},
               [](double, VectorView x, VectorView u, VectorView p, std::span<double> dx) { dx[0] = -x[0] + p[0] * u[0]; },
               [](double, VectorView x, VectorView, VectorView, std::span<double> y) { y[0] = x[0]; },
               [](VectorView) { return Vector{0.0}; }, ParameterBox{{1.0}, {0.5}, {1.5}});
}

// x' = -p1 x + u, y = x; p2 acts on nothing, p3 duplicates p1's role in a second state.
Model with_dead_parameter() {
  return Model("dead", Dimensions{1, 2, 1, 3},
               [](double, VectorView x, VectorView u, VectorView p, std::span<double> dx) {
                 dx[0] = -p[0] * x[0] + u[0];
                 dx[1] = -p[2] * x[1] + u[0];
               },
               [](double, VectorView x, VectorView, VectorView, std::span<double> y) { y[0] = x[0] + x[1]; },
               [](VectorView) { return Vector{0.0, 0.0}; }, ParameterBox{{1, 1, 1}, {0.5, 0.5, 0.5}, {1.5, 1.5, 1.5}});
}

}  // namespace

TEST_CASE("scalar Lyapunov values") {
  const TimeGrid g(0.01, 40.0);
  const Model s = lti({{-1}}, {{1}}, {{1}});
  CHECK(empirical_controllability(s, {}, impulse_01, g).matrix(0, 0) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(empirical_observability(s, {}, g).matrix(0, 0) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(empirical_cross(s, {}, impulse_01, g).matrix(0, 0) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(empirical_linear_cross(s, {}, impulse_01, g).matrix(0, 0) == doctest::Approx(0.5).epsilon(0.02));
  const Model two = lti({{-1}}, {{1}}, {{2}});
  CHECK(empirical_output_controllability(two, {}, impulse_01, g).matrix(0, 0) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(empirical_controllability(lti({{-1}}, {{0}}, {{1}}), {}, impulse_01, g).matrix(0, 0) == 0.0);
  CHECK(empirical_linear_cross(lti({{-1}}, {{1}}, {{0}}), {}, impulse_01, g).matrix(0, 0) == 0.0);
}

TEST_CASE("controllability and observability against the Kronecker oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    const LtiSystem sys = oracle::random_stable(rng, 3, 2, 2);
    const double t_end = 30.0 / oracle::slowest_rate(sys);
    const TimeGrid g(2e-3, t_end);
    const InputFunction imp = make_input(InputKind::impulse, InputParams{2e-3, t_end, 1, 0.0});
    const Model m = make_lti_model(sys);
    const Matrix wc = empirical_controllability(m, {}, imp, g).matrix;
    const Matrix wo = empirical_observability(m, {}, g).matrix;
    const Matrix rc = oracle::from_eigen(oracle::controllability(sys));
    const Matrix ro = oracle::from_eigen(oracle::observability(sys));
    CHECK(frobenius_norm(wc - rc) / frobenius_norm(rc) < 0.01);
    CHECK(frobenius_norm(wo - ro) / frobenius_norm(ro) < 0.01);
    CHECK(asymmetry(wc) == 0.0);
  }
}

TEST_CASE("symmetric system: cross Gramian matches controllability") {
  const Model m = lti({{-2, 1}, {1, -3}}, {{1}, {0.5}}, {{1, 0.5}});
  const TimeGrid g(0.01, 20.0);
  const InputFunction imp = make_input(InputKind::impulse, InputParams{0.01, 20.0, 1, 0.0});
  const Matrix wc = empirical_controllability(m, {}, imp, g).matrix;
  const Matrix wx = empirical_cross(m, {}, imp, g).matrix;
  const Matrix wy = empirical_linear_cross(m, {}, imp, g).matrix;
  CHECK(frobenius_norm(wx - wc) / frobenius_norm(wc) < 0.02);
  CHECK(frobenius_norm(wy - wx) / frobenius_norm(wx) < 0.02);
}

TEST_CASE("output controllability equals C WC C^T for every input kind") {
  const LtiSystem sys{{{-1, 0.3}, {0, -0.5}}, {{1, 0}, {0.2, 1}}, {{1, 1}, {0, 2}, {3, -1}}};
  const Model m = make_lti_model(sys);
  const TimeGrid g(0.01, 10.0);
  for (auto name : input_kind_names()) {
    const InputFunction u = make_input(parse_input_kind(name), InputParams{0.01, 10.0, 3, 0.0});
    const Matrix wc = empirical_controllability(m, {}, u, g).matrix;
    const Matrix woc = empirical_output_controllability(m, {}, u, g).matrix;
    CHECK(max_abs(woc - sys.C * wc * sys.C.transposed()) <= 1e-10 * std::max(1.0, max_abs(woc)));
  }
}

TEST_CASE("average observability equals the output-summed model") {
  const Model m = lti({{-1, 0.2}, {0.1, -2}}, {{1}, {0}}, {{1, 2}, {-1, 1}});
  const TimeGrid g(0.01, 5.0);
  GramianOptions avg;
  avg.average = true;
  CHECK(empirical_observability(m, {}, g, avg).matrix == empirical_observability(m.with_summed_output(), {}, g).matrix);
  CHECK(empirical_observability(lti({{-1}}, {{1}}, {{0}}), {}, g).matrix(0, 0) == 0.0);
}

TEST_CASE("cross Gramian configuration checks") {
  const Model rect = lti({{-1}}, {{1}}, {{1}, {1}});
  const TimeGrid g(0.01, 1.0);
  CHECK_THROWS_AS(empirical_cross(rect, {}, impulse_01, g), ConfigError);
  GramianOptions ns;
  ns.nonsym = true;
  CHECK_NOTHROW(empirical_cross(rect, {}, impulse_01, g, ns));
  CHECK_THROWS_AS(empirical_linear_cross(theta_input(), {}, impulse_01, g), ConfigError);
  PerturbationDesign bad;
  bad.input_scales = {0.0};
  CHECK_THROWS_AS(empirical_controllability(lti({{-1}}, {{1}}, {{1}}), bad, impulse_01, g), ConfigError);
}

TEST_CASE("parameter perturbation design") {
  const auto pp = design_parameter_perturbations(CenteringMode{CenteringKind::nominal, {0}, {3}, {1}}, 1);
  REQUIRE(pp.size() == 2);
  CHECK(pp[0].params == Vector{3});
  CHECK(pp[0].displacement == 2.0);
  CHECK(pp[1].params == Vector{0});
  CHECK(pp[1].level == 1);
  const auto top = design_parameter_perturbations(CenteringMode{CenteringKind::nominal, {0, 1}, {3, 2}, {3, 2}}, 2);
  for (const auto& p : top) CHECK(p.displacement < 0.0);
  CHECK(top.size() == 4);
  CHECK(centering_center(CenteringMode{CenteringKind::midpoint, {1, 2}, {3, 8}, {}}) == Vector{2, 5});
  CHECK(centering_center(CenteringMode{CenteringKind::logarithmic, {1, 2}, {4, 8}, {}})[1] == doctest::Approx(4.0));
  CHECK_THROWS_AS(centering_center(CenteringMode{CenteringKind::logarithmic, {0}, {1}, {}}), DomainError);
  CHECK_THROWS_AS(centering_center(CenteringMode{CenteringKind::nominal, {0}, {1}, {}}), ConfigError);
}

TEST_CASE("sensitivity Gramian") {
  const TimeGrid g(0.01, 20.0);
  const GramianResult r = empirical_sensitivity(theta_input(), {}, impulse_01, g);
  CHECK(r.matrix(0, 0) > 0.0);
  const GramianResult d = empirical_sensitivity(with_dead_parameter(), {}, impulse_01, g);
  CHECK(std::abs(d.matrix(1, 1)) <= 1e-10);
  CHECK(d.matrix(0, 0) == doctest::Approx(d.matrix(2, 2)).epsilon(1e-8));
  CHECK(d.matrix(0, 1) == 0.0);
  CHECK_THROWS_AS(empirical_sensitivity(lti({{-1}}, {{1}}, {{1}}), {}, impulse_01, g), ConfigError);
}

TEST_CASE("identifiability Gramian") {
  const TimeGrid g(0.01, 10.0);
  const GramianResult decay = empirical_identifiability(builtin_model("decay"), {}, g);
  CHECK(decay.matrix(0, 0) > 0.0);
  REQUIRE(decay.blocks);
  CHECK(decay.blocks->state.rows() == 1);
  CHECK(decay.blocks->mixed.rows() == 1);

  GramianOptions opt;
  opt.drive = make_input(InputKind::step, {});
  const GramianResult dead = empirical_identifiability(with_dead_parameter(), {}, g, opt);
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(dead.blocks->param(1, j)) <= 1e-10);
  CHECK(dead.matrix(0, 0) > 0.0);

  opt.schur = SchurMode::approximate;
  const GramianResult approx = empirical_identifiability(with_dead_parameter(), {}, g, opt);
  CHECK(approx.matrix == symmetrized(approx.blocks->param));
}

TEST_CASE("joint Gramian") {
  const TimeGrid g(0.01, 10.0);
  GramianOptions opt;
  opt.drive = make_input(InputKind::step, {});
  const GramianResult r = empirical_joint(theta_input(), {}, impulse_01, g, opt);
  REQUIRE(r.blocks);
  const double wx = r.blocks->state(0, 0);
  const double wm = r.blocks->mixed(0, 0);
  CHECK(r.matrix(0, 0) == doctest::Approx(-0.5 * wm * wm / (2.0 * wx)).epsilon(1e-10));
  opt.schur = SchurMode::approximate;
  const GramianResult a = empirical_joint(theta_input(), {}, impulse_01, g, opt);
  CHECK(a.matrix(0, 0) == doctest::Approx(-0.5 * wm * wm / (2.0 * wx)).epsilon(1e-10));

  // Without any coupling between parameter and output the joint Gramian vanishes.
  const Model uncoupled("uncoupled", Dimensions{1, 1, 1, 1},
                        [](double, VectorView x, VectorView u, VectorView, std::span<double> dx) { dx[0] = -x[0] + u[0]; },
                        [](double, VectorView x, VectorView, VectorView, std::span<double> y) { y[0] = x[0]; },
                        [](VectorView) { return Vector{0.0}; }, ParameterBox{{1.0}, {0.5}, {1.5}});
  CHECK(empirical_joint(uncoupled, {}, impulse_01, g, opt).matrix(0, 0) == 0.0);
}

TEST_CASE("results do not depend on the thread count") {
  const Model m = builtin_jakstat();
  const TimeGrid g(0.01, 2.0);
  PerturbationDesign d;
  d.state_scales = {0.1};
  GramianOptions one;
  one.drive = make_input(InputKind::step, {});
  one.centering = CenteringMode{CenteringKind::nominal, Vector(23, 0.5), Vector(23, 1.5), Vector(23, 1.0)};
  GramianOptions four = one;
  four.threads = 4;
  CHECK(empirical_identifiability(m, d, g, one).matrix == empirical_identifiability(m, d, g, four).matrix);
  const InputFunction step = make_input(InputKind::step, {});
  CHECK(empirical_controllability(m, d, step, g, one).matrix == empirical_controllability(m, d, step, g, four).matrix);
}

TEST_CASE("kind names and dispatch") {
  for (auto n : gramian_kind_names()) CHECK(to_string(parse_gramian_kind(n)) == n);
  CHECK_THROWS_AS(parse_gramian_kind("wz"), ConfigError);
  const Model s = lti({{-1}}, {{1}}, {{1}});
  const TimeGrid g(0.01, 10.0);
  CHECK(compute_gramian(GramianKind::controllability, s, {}, impulse_01, g).kind == GramianKind::controllability);
  CHECK(to_string(parse_offset_mode("reference")) == "reference");
  CHECK(to_string(parse_centering_kind("log")) == "log");
}
