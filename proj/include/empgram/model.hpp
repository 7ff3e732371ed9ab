#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "empgram/matrix.hpp"

namespace empgram {

struct Dimensions {
  std::size_t inputs = 0;   // M
  std::size_t states = 0;   // N
  std::size_t outputs = 0;  // Q
  std::size_t params = 0;   // P
};

/// Nominal value and admissible box of the parameter vector. Empty vectors
/// mean "not supplied".
struct ParameterBox {
  Vector nominal;
  Vector lower;
  Vector upper;
};

/// State-space matrices of x' = A x + B u, y = C x.
struct LtiSystem {
  Matrix A;
  Matrix B;
  Matrix C;
};

/// Input-output ODE system x' = f(t, x, u, p), y = g(t, x, u, p), x(0) = x0(p).
///
/// Parameters are passed explicitly on every call so that perturbation loops
/// share one immutable model. Callbacks must be pure and re-entrant; a Model
/// is safe to use from any number of threads.
class Model {
 public:
  using Dynamics = std::function<void(double t, VectorView x, VectorView u, VectorView p, std::span<double> dx)>;
  using OutputMap = std::function<void(double t, VectorView x, VectorView u, VectorView p, std::span<double> y)>;
  using InitialState = std::function<Vector(VectorView p)>;

  Model(std::string name, Dimensions dims, Dynamics f, OutputMap g, InitialState x0, ParameterBox box = {});

  const std::string& name() const noexcept { return name_; }
  const Dimensions& dims() const noexcept { return dims_; }
  const ParameterBox& parameters() const noexcept { return box_; }
  const std::optional<LtiSystem>& lti() const noexcept { return lti_; }

  /// Checked evaluation of f; throws ConfigError on size mismatch and
  /// DivergenceError when the result is not finite.
  Vector eval_dynamics(double t, VectorView x, VectorView u, VectorView p) const;
  /// Checked evaluation of g.
  Vector eval_output(double t, VectorView x, VectorView u, VectorView p) const;
  Vector initial_state(VectorView p) const;

  // Unchecked hot-path evaluation, used by the integrator after it has
  // validated dimensions once.
  void dynamics_into(double t, VectorView x, VectorView u, VectorView p, std::span<double> dx) const {
    f_(t, x, u, p, dx);
  }
  void output_into(double t, VectorView x, VectorView u, VectorView p, std::span<double> y) const {
    g_(t, x, u, p, y);
  }

  Model with_parameters(ParameterBox box) const;
  /// Same dynamics, single output equal to the sum of all outputs (in index order).
  Model with_summed_output() const;

 private:
  friend Model make_lti_model(LtiSystem sys, std::string name);

  void check_sizes(VectorView x, VectorView u, VectorView p) const;

  std::string name_;
  Dimensions dims_;
  Dynamics f_;
  OutputMap g_;
  InitialState x0_;
  ParameterBox box_;
  std::optional<LtiSystem> lti_;
};

/// Linear time-invariant model with x0 = 0 and no parameters.
Model make_lti_model(LtiSystem sys, std::string name = "lti");

/// IL13-induced JAK/STAT signalling benchmark: M=1, N=10, Q=8, P=23.
Model builtin_jakstat();

namespace jakstat {
inline constexpr double c1 = 2.265;
inline constexpr double c2 = 91.0;
inline constexpr double c3 = 2.8;
inline constexpr double c4 = 165.0;
inline constexpr double c5 = 0.34;
}  // namespace jakstat

/// Names accepted by builtin_model().
std::vector<std::string> builtin_model_names();

/// "jakstat", "scalar" (x' = -x + u, y = x), "decay" (x' = -p1 x, y = x, x0 = 1).
/// Throws ConfigError for unknown names.
Model builtin_model(std::string_view name);

/// Parses the A/B/C block text format. Throws ParseError (with line) on
/// malformed numbers or ragged rows, ConfigError on inconsistent dimensions.
LtiSystem parse_lti(std::string_view text);
Model load_lti(std::string_view text, std::string name = "lti");

}  // namespace empgram
