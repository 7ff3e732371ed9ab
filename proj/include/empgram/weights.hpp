#pragma once

#include <string_view>
#include <vector>

#include "empgram/matrix.hpp"
#include "empgram/ode.hpp"

namespace empgram {

/// Trajectory post-processing applied before Gramian accumulation. Exactly one
/// scheme is active per computation.
enum class Weighting { none, time_linear, time_quadratic, time_reciprocal, column, row };

/// Factor multiplying the integrand Psi(t):
///   none, column, row -> 1
///   time_linear       -> t
///   time_quadratic    -> t^2 / 2
///   time_reciprocal   -> 1 / sqrt(pi t), and sqrt(2 / (pi dt)) at t = 0
/// Throws DomainError for t < 0 or dt <= 0.
double time_weight_factor(Weighting scheme, double t, double dt);

/// Quadrature weights q_k for sum_k q_k Psi(t_k) over the K+1 grid samples.
///
/// Step k (from t_{k-1} to t_k) contributes its end-of-step sample with width h
/// and the time factor of the step start, so q_0 = 0 and
/// q_k = h * time_weight_factor(t_{k-1}). An impulse acting over [0, h) is then
/// accumulated from the first sample that has seen it.
Vector quadrature_weights(Weighting scheme, const TimeGrid& grid);

/// Divides each sample column by its 2-norm; zero columns are left as is.
Trajectory normalize_columns(Trajectory traj);
/// Divides each component row by its maximum absolute value; zero rows are left as is.
Trajectory normalize_rows(Trajectory traj);

void normalize_columns_in_place(Matrix& samples);
void normalize_rows_in_place(Matrix& samples);
/// Column or row normalization for those schemes, no-op for the others.
void apply_normalization(Weighting scheme, Matrix& samples);

/// "none", "tlin", "tquad", "trec", "col", "row"
Weighting parse_weighting(std::string_view name);
std::string_view to_string(Weighting scheme);
std::vector<std::string_view> weighting_names();

}  // namespace empgram
