#include "empgram/weights.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "empgram/error.hpp"
#include "empgram/kernels.hpp"

namespace empgram {

double time_weight_factor(Weighting scheme, double t, double dt) {
  if (!(t >= 0.0)) throw DomainError("time weight: t must be nonnegative");
  if (!(dt > 0.0)) throw DomainError("time weight: dt must be positive");
  switch (scheme) {
    case Weighting::time_linear: return t;
    case Weighting::time_quadratic: return 0.5 * t * t;
    case Weighting::time_reciprocal:
      if (t == 0.0) return std::sqrt(2.0 / (std::numbers::pi * dt));
      return 1.0 / std::sqrt(std::numbers::pi * t);
    case Weighting::none:
    case Weighting::column:
    case Weighting::row:
      return 1.0;
  }
  return 1.0;
}

Vector quadrature_weights(Weighting scheme, const TimeGrid& grid) {
  const double h = grid.step();
  Vector q(grid.samples(), 0.0);
  for (std::size_t k = 1; k < q.size(); ++k) q[k] = h * time_weight_factor(scheme, grid.time(k - 1), h);
  return q;
}

void normalize_columns_in_place(Matrix& s) {
  for (std::size_t k = 0; k < s.cols(); ++k) {
    double sq = 0.0;
    for (std::size_t i = 0; i < s.rows(); ++i) sq += s(i, k) * s(i, k);
    if (sq == 0.0) continue;
    const double norm = std::sqrt(sq);
    for (std::size_t i = 0; i < s.rows(); ++i) s(i, k) /= norm;
  }
}

void normalize_rows_in_place(Matrix& s) {
  const auto& kt = kernels::active();
  for (std::size_t i = 0; i < s.rows(); ++i) {
    auto row = s.row(i);
    const double m = kt.max_abs(row.data(), row.size());
    if (m == 0.0) continue;
    // Division rather than multiplication by 1/m keeps the extreme entry at exactly +-1.
    for (double& v : row) v /= m;
  }
}

Trajectory normalize_columns(Trajectory traj) {
  normalize_columns_in_place(traj.samples);
  return traj;
}

Trajectory normalize_rows(Trajectory traj) {
  normalize_rows_in_place(traj.samples);
  return traj;
}

void apply_normalization(Weighting scheme, Matrix& samples) {
  if (scheme == Weighting::column) normalize_columns_in_place(samples);
  if (scheme == Weighting::row) normalize_rows_in_place(samples);
}

Weighting parse_weighting(std::string_view name) {
  if (name == "none") return Weighting::none;
  if (name == "tlin") return Weighting::time_linear;
  if (name == "tquad") return Weighting::time_quadratic;
  if (name == "trec") return Weighting::time_reciprocal;
  if (name == "col") return Weighting::column;
  if (name == "row") return Weighting::row;
  throw ConfigError("unknown weighting '" + std::string(name) + "'");
}

std::string_view to_string(Weighting scheme) {
  switch (scheme) {
    case Weighting::none: return "none";
    case Weighting::time_linear: return "tlin";
    case Weighting::time_quadratic: return "tquad";
    case Weighting::time_reciprocal: return "trec";
    case Weighting::column: return "col";
    case Weighting::row: return "row";
  }
  return "none";
}

std::vector<std::string_view> weighting_names() { return {"none", "tlin", "tquad", "trec", "col", "row"}; }

}  // namespace empgram
