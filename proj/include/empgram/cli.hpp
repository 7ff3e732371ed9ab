#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "empgram/gramian.hpp"
#include "empgram/linalg.hpp"
#include "empgram/signals.hpp"
#include "empgram/weights.hpp"

namespace empgram::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_divergence = 3;

struct ExperimentConfig {
  std::string model = "jakstat";  ///< builtin name or LTI file path
  GramianKind kind = GramianKind::controllability;
  std::optional<InputKind> input;  ///< unset: impulse for gramian, step for identify
  double h = 0.01;
  double horizon = 100.0;
  Weighting weighting = Weighting::none;
  CenteringKind centering = CenteringKind::nominal;
  Vector theta_min;  ///< empty: nominal * (1 - 0.5); one value broadcasts
  Vector theta_max;  ///< empty: nominal * (1 + 0.5)
  Vector theta_nom;  ///< empty: model nominal
  Vector input_scales{1.0};
  Vector state_scales;  ///< empty: {1} for gramian, {0.1} for identify
  std::optional<OffsetMode> offset;
  std::size_t levels = 1;
  SchurMode schur = SchurMode::exact;
  bool average = false;
  bool nonsym = false;
  std::optional<std::size_t> tail;  ///< unset: 7, or the spectral gap when P <= 7
  double threshold = 1e-7;
  std::string out = ".";
  std::size_t threads = 0;
  std::uint64_t seed = 1;
};

/// Defaults of the identify subcommand: step stimulation over T = 10, row
/// weighting, state scale 0.1, tail 7.
ExperimentConfig identify_defaults();

/// Computes one Gramian and writes <out>/gramian.txt.
int cmd_gramian(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Identifiability study; writes singular_values.csv, contributions.csv and
/// config.txt into <out>.
int cmd_identify(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

int cmd_list(std::ostream& out);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace empgram::cli
