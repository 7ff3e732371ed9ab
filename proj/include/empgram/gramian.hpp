#pragma once

// Empirical Gramians assembled from ensembles of perturbed simulations.
//
// Every Gramian follows the same pattern: simulate one trajectory per
// perturbation (input channel and scale, initial-state direction and scale,
// or parameter displacement), center it, divide by its perturbation scale,
// optionally normalize it, then accumulate time-weighted inner products
//
//   W = 1/|levels| * sum_runs sum_k q_k psi(t_k) psi(t_k)^T
//
// with the quadrature weights q_k of weights.hpp. Simulations run in
// parallel; accumulation always happens afterwards in a fixed run order, so
// results are bit-identical for every thread count.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "empgram/linalg.hpp"
#include "empgram/matrix.hpp"
#include "empgram/model.hpp"
#include "empgram/ode.hpp"
#include "empgram/signals.hpp"
#include "empgram/weights.hpp"

namespace empgram {

enum class GramianKind {
  controllability,         // wc
  output_controllability,  // woc
  observability,           // wo
  cross,                   // wx
  linear_cross,            // wy
  sensitivity,             // ws
  identifiability,         // wi
  joint,                   // wj
};

GramianKind parse_gramian_kind(std::string_view name);
std::string_view to_string(GramianKind kind);
std::vector<std::string_view> gramian_kind_names();

/// How a trajectory is centered before use.
///   zero      - unchanged
///   initial   - minus its own first sample
///   final     - minus its own last sample
///   mean      - minus its own time average
///   reference - minus the unperturbed trajectory, sample by sample
enum class OffsetMode { zero, initial, final, mean, reference };

OffsetMode parse_offset_mode(std::string_view name);
std::string_view to_string(OffsetMode mode);

struct PerturbationDesign {
  Vector input_scales{1.0};                  ///< S_u, nonzero
  std::vector<std::size_t> input_directions;  ///< E_u as channel indices; empty = all
  Vector state_scales{1.0};                  ///< S_x, nonzero
  std::vector<std::size_t> state_directions;  ///< E_x as state indices; empty = all
  Vector input_offset;                       ///< u-bar; empty = 0
  Vector state_offset;                       ///< x-bar; empty = initial_state(center parameters)
  /// Unset: controllability side uses `final` for step inputs and `zero`
  /// otherwise; observability side and parameter runs use `reference`.
  std::optional<OffsetMode> offset;
};

enum class CenteringKind { midpoint, logarithmic, nominal };

CenteringKind parse_centering_kind(std::string_view name);
std::string_view to_string(CenteringKind kind);

/// Parameter range and the point perturbations are taken around.
struct CenteringMode {
  CenteringKind kind = CenteringKind::nominal;
  Vector lower;
  Vector upper;
  Vector nominal;  ///< required for CenteringKind::nominal
};

/// midpoint (lower+upper)/2, geometric mean, or nominal. Validates the box.
Vector centering_center(const CenteringMode& mode);

struct ParameterPerturbation {
  std::size_t param = 0;      ///< perturbed component j
  std::size_t level = 0;      ///< 0..count-1 upward, count..2count-1 downward
  double displacement = 0.0;  ///< signed change of component j
  Vector params;              ///< perturbed parameter vector
};

/// For each parameter j and s in {1/count, ..., 1}: center + s (upper_j -
/// center_j) e_j, then center - s (center_j - lower_j) e_j. Sides with zero
/// half-width are skipped. Throws DomainError for a logarithmic center with
/// lower <= 0, ConfigError for a nominal center without nominal values or an
/// inconsistent box.
std::vector<ParameterPerturbation> design_parameter_perturbations(const CenteringMode& centering, std::size_t count);

struct GramianOptions {
  Weighting weighting = Weighting::none;
  bool average = false;  ///< observability side: sum all outputs into one
  bool nonsym = false;   ///< cross-type: pair summed inputs with summed outputs
  SchurMode schur = SchurMode::exact;
  std::size_t threads = 1;  ///< 0 = hardware concurrency
  std::size_t levels = 1;   ///< parameter perturbation levels per side
  /// Parameter range. Unset: the model's parameter box in nominal mode.
  std::optional<CenteringMode> centering;
  /// Excitation of observability-side and parameter runs, applied on every
  /// input channel on top of the input offset. Unset: input offset only.
  std::optional<InputFunction> drive;
  Solver solver;    ///< empty = integrate()
  SolverHook hook;  ///< parameter runs; empty = default_hook_for_initial_state_params
};

/// Partition of an augmented Gramian. For identifiability: state = W_O,
/// mixed = W_M, param = W_P. For the joint Gramian: state = W_X, mixed = W_m,
/// param empty. Mixed blocks are stored P x N.
struct AugmentedBlocks {
  Matrix state;
  Matrix mixed;
  Matrix param;
};

struct GramianResult {
  GramianKind kind = GramianKind::controllability;
  Matrix matrix;
  std::optional<AugmentedBlocks> blocks;
  Vector sensitivities;                  ///< ws: per-parameter traces
  std::vector<Matrix> parameter_gramians;  ///< ws: per-parameter state Gramians
};

GramianResult empirical_controllability(const Model& model, const PerturbationDesign& design,
                                        const InputFunction& input, const TimeGrid& grid,
                                        const GramianOptions& options = {});

/// Q x Q Gramian built from output trajectories directly.
GramianResult empirical_output_controllability(const Model& model, const PerturbationDesign& design,
                                               const InputFunction& input, const TimeGrid& grid,
                                               const GramianOptions& options = {});

GramianResult empirical_observability(const Model& model, const PerturbationDesign& design, const TimeGrid& grid,
                                      const GramianOptions& options = {});

/// Requires M == Q unless options.nonsym.
GramianResult empirical_cross(const Model& model, const PerturbationDesign& design, const InputFunction& input,
                              const TimeGrid& grid, const GramianOptions& options = {});

/// Primal x' = A x + B u against dual z' = A^T z + C^T v with matched input
/// channels. Requires an LTI model with M == Q.
GramianResult empirical_linear_cross(const Model& model, const PerturbationDesign& design,
                                     const InputFunction& input, const TimeGrid& grid,
                                     const GramianOptions& options = {});

GramianResult empirical_sensitivity(const Model& model, const PerturbationDesign& design,
                                    const InputFunction& input, const TimeGrid& grid,
                                    const GramianOptions& options = {});

/// Augmented observability Gramian over [x; p] and its Schur complement.
GramianResult empirical_identifiability(const Model& model, const PerturbationDesign& design, const TimeGrid& grid,
                                        const GramianOptions& options = {});

/// Augmented cross Gramian and the cross-identifiability Gramian
/// -1/2 W_m (W_X + W_X^T)^+ W_m^T (exact) or its scaled-identity
/// approximation -1/2 W_m W_m^T / (tr(W_X + W_X^T) / N).
GramianResult empirical_joint(const Model& model, const PerturbationDesign& design, const InputFunction& input,
                              const TimeGrid& grid, const GramianOptions& options = {});

GramianResult compute_gramian(GramianKind kind, const Model& model, const PerturbationDesign& design,
                              const InputFunction& input, const TimeGrid& grid, const GramianOptions& options = {});

}  // namespace empgram
