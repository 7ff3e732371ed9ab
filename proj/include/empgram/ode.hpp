#pragma once

#include <cstddef>
#include <functional>

#include "empgram/matrix.hpp"
#include "empgram/model.hpp"
#include "empgram/signals.hpp"

namespace empgram {

/// Uniform grid t_k = k h, k = 0..K, with K = round(T / h) >= 2.
class TimeGrid {
 public:
  TimeGrid(double step, double horizon);

  double step() const noexcept { return step_; }
  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t samples() const noexcept { return steps_ + 1; }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * step_; }

 private:
  double step_;
  double horizon_;
  std::size_t steps_;
};

enum class SampleKind { state, output };

/// samples(i, k) is component i at time t_k.
struct Trajectory {
  TimeGrid grid;
  Matrix samples;
  SampleKind kind = SampleKind::state;
};

/// Vector input u(t) = gain * shape(t) + offset. Without a shape the input is
/// the constant offset.
struct InputDrive {
  std::optional<InputFunction> shape;
  Vector gain;
  Vector offset;

  static InputDrive zero(std::size_t inputs) { return {std::nullopt, Vector(inputs, 0.0), Vector(inputs, 0.0)}; }
  void eval(double t, std::span<double> u) const;
};

struct InitialCondition {
  Vector state;
  Vector params;
};

/// Applied once before stepping. An empty hook is the identity.
using SolverHook = std::function<InitialCondition(const Model&, VectorView x0, VectorView params)>;

/// Hook for models whose initial state depends on parameters. Components of
/// initial_state that vary with the parameters are taken from
/// initial_state(params); every other component keeps its displacement from
/// initial_state(reference), i.e. x0' = initial_state(params) + (x0 - base)
/// there.
SolverHook default_hook_for_initial_state_params(const Model& model, VectorView reference);
/// Same, with the model's nominal parameters as reference.
SolverHook default_hook_for_initial_state_params(const Model& model);

/// Classical fixed-step RK4. Inputs are sampled at t_k, t_k + h/2 and just below t_k + h.
/// Throws ConfigError on dimension mismatch, DivergenceError (carrying the
/// step index) when the state stops being finite.
Trajectory integrate(const Model& model, VectorView x0, VectorView params, const InputDrive& input,
                     const TimeGrid& grid, SampleKind want, const SolverHook& hook = {});

using Solver = std::function<Trajectory(const Model&, VectorView, VectorView, const InputDrive&, const TimeGrid&,
                                        SampleKind, const SolverHook&)>;

}  // namespace empgram
