#include "empgram/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "empgram/error.hpp"
#include "empgram/kernels.hpp"
#include "empgram/matrix_io.hpp"

namespace empgram {

TimeGrid::TimeGrid(double step, double horizon) : step_(step), horizon_(horizon), steps_(0) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("time step h must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon T must be positive");
  const double k = std::round(horizon / step);
  if (k < 2.0) throw ConfigError("time grid needs at least 2 steps (T / h >= 2)");
  steps_ = static_cast<std::size_t>(k);
}

void InputDrive::eval(double t, std::span<double> u) const {
  if (shape) {
    const double s = (*shape)(t);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = gain[i] * s + offset[i];
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = offset[i];
  }
}

SolverHook default_hook_for_initial_state_params(const Model& model, VectorView reference) {
  Vector base = model.initial_state(reference);
  // Components of x0 that move with some parameter are set from the
  // parameters; the others keep the caller's offset from the reference.
  std::vector<char> set(base.size(), 0);
  Vector probe(reference.begin(), reference.end());
  for (std::size_t j = 0; j < probe.size(); ++j) {
    const double keep = probe[j];
    probe[j] = keep + 0.5 * std::max(1.0, std::abs(keep));
    const Vector moved = model.initial_state(probe);
    for (std::size_t i = 0; i < base.size(); ++i)
      if (moved[i] != base[i]) set[i] = 1;
    probe[j] = keep;
  }
  return [base = std::move(base), set = std::move(set)](const Model& m, VectorView x0, VectorView p) {
    InitialCondition ic{m.initial_state(p), Vector(p.begin(), p.end())};
    for (std::size_t i = 0; i < ic.state.size(); ++i)
      if (!set[i]) ic.state[i] += x0[i] - base[i];
    return ic;
  };
}

SolverHook default_hook_for_initial_state_params(const Model& model) {
  const Vector& nominal = model.parameters().nominal;
  if (nominal.size() != model.dims().params) throw ConfigError("initial-state hook: model has no nominal parameters");
  return default_hook_for_initial_state_params(model, nominal);
}

namespace {

bool all_finite(VectorView v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

Trajectory integrate(const Model& model, VectorView x0_in, VectorView params_in, const InputDrive& input,
                     const TimeGrid& grid, SampleKind want, const SolverHook& hook) {
  const Dimensions& d = model.dims();
  if (x0_in.size() != d.states) throw ConfigError("integrate: initial state length mismatch");
  if (params_in.size() != d.params) throw ConfigError("integrate: parameter length mismatch");
  if (input.offset.size() != d.inputs || (input.shape && input.gain.size() != d.inputs))
    throw ConfigError("integrate: input drive length mismatch");

  InitialCondition ic = hook ? hook(model, x0_in, params_in)
                             : InitialCondition{Vector(x0_in.begin(), x0_in.end()), Vector(params_in.begin(), params_in.end())};
  if (ic.state.size() != d.states || ic.params.size() != d.params) throw ConfigError("integrate: hook changed dimensions");
  if (!all_finite(ic.state)) throw DivergenceError("non-finite initial state", 0.0, 0, ic.state);

  const auto& kt = kernels::active();
  const std::size_t n = d.states;
  const double h = grid.step();
  const std::size_t rows = want == SampleKind::state ? n : d.outputs;

  Trajectory traj{grid, Matrix(rows, grid.samples()), want};
  Vector x = std::move(ic.state);
  const Vector& p = ic.params;
  Vector u(d.inputs), k1(n), k2(n), k3(n), k4(n), tmp(n), y(d.outputs);

  auto store = [&](std::size_t k, double t) {
    if (want == SampleKind::state) {
      for (std::size_t i = 0; i < n; ++i) traj.samples(i, k) = x[i];
    } else {
      input.eval(t, u);
      model.output_into(t, x, u, p, y);
      for (std::size_t i = 0; i < d.outputs; ++i) traj.samples(i, k) = y[i];
    }
  };

  store(0, 0.0);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = grid.time(k);
    input.eval(t, u);
    model.dynamics_into(t, x, u, p, k1);

    input.eval(t + 0.5 * h, u);
    tmp = x;
    kt.axpy(0.5 * h, k1.data(), tmp.data(), n);
    model.dynamics_into(t + 0.5 * h, tmp, u, p, k2);
    tmp = x;
    kt.axpy(0.5 * h, k2.data(), tmp.data(), n);
    model.dynamics_into(t + 0.5 * h, tmp, u, p, k3);

    // Left limit at the step end, so inputs supported on [t_k, t_k + h) act
    // over the whole step.
    const double t_end = grid.time(k + 1);
    input.eval(std::nextafter(t_end, t), u);
    tmp = x;
    kt.axpy(h, k3.data(), tmp.data(), n);
    model.dynamics_into(t_end, tmp, u, p, k4);

    // x += h/6 (k1 + 2 k2 + 2 k3 + k4)
    kt.axpy(h / 6.0, k1.data(), x.data(), n);
    kt.axpy(h / 3.0, k2.data(), x.data(), n);
    kt.axpy(h / 3.0, k3.data(), x.data(), n);
    kt.axpy(h / 6.0, k4.data(), x.data(), n);

    if (!all_finite(x)) {
      throw DivergenceError("simulation diverged at step " + std::to_string(k + 1) + " (t=" +
                                format_number(grid.time(k + 1)) + ")",
                            grid.time(k + 1), k + 1, x);
    }
    store(k + 1, grid.time(k + 1));
  }
  if (want == SampleKind::output && !all_finite(traj.samples.data()))
    throw DivergenceError("non-finite output", grid.horizon(), grid.steps(), x);
  return traj;
}

}  // namespace empgram
