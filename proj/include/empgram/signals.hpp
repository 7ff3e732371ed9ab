#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <vector>

namespace empgram {

enum class InputKind { impulse, step, sinc, chirp, prbs, custom };

/// Parameters shared by the built-in training inputs. Unused fields are ignored.
struct InputParams {
  double step = 0.01;     ///< time-step width h (impulse, sinc, chirp, prbs)
  double horizon = 1.0;   ///< T (chirp, prbs)
  std::uint64_t seed = 1; ///< prbs
  double bit_duration = 0.0;  ///< prbs hold time; 0 selects 10 h
};

/// Scalar training input u(t), t >= 0. Immutable; copies share state.
///
/// Channel selection and amplitude scaling are applied by the caller; this is
/// only the shape of the excitation.
class InputFunction {
 public:
  InputFunction();  // step

  double operator()(double t) const { return eval_(t); }
  InputKind kind() const noexcept { return kind_; }

  static InputFunction custom(std::function<double(double)> fn);

 private:
  friend InputFunction make_input(InputKind kind, const InputParams& params);
  InputFunction(InputKind kind, std::function<double(double)> fn) : kind_(kind), eval_(std::move(fn)) {}

  InputKind kind_;
  std::function<double(double)> eval_;
};

/// Throws ConfigError for non-positive step width (or horizon for chirp/prbs).
InputFunction make_input(InputKind kind, const InputParams& params);

/// "impulse", "step", "sinc", "chirp", "prbs"
InputKind parse_input_kind(std::string_view name);
std::string_view to_string(InputKind kind);
std::vector<std::string_view> input_kind_names();

}  // namespace empgram
