#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "empgram/matrix.hpp"

namespace empgram {

struct IdentifiabilityReport {
  Vector singular_values;  ///< descending
  Matrix vectors;          ///< U, columns ordered like singular_values
  std::size_t tail_size = 0;
  Vector u_bar;            ///< sum of |u_k| over the tail columns
  Vector relative;         ///< u_bar / max(u_bar)
  std::vector<std::size_t> ranking;         ///< parameter indices, u_bar descending, ties by index
  std::vector<std::size_t> identifiable;   ///< indices with relative < threshold, ascending
  double threshold = 1e-7;
};

/// Spectral identifiability analysis of a P x P identifiability Gramian.
/// Without a tail size the tail is P minus the numerical rank, cut at the
/// largest gap in log singular values. Throws ConfigError unless
/// 0 < tail_size < P.
IdentifiabilityReport analyze_identifiability(const Matrix& w_i, std::optional<std::size_t> tail_size = std::nullopt,
                                              double threshold = 1e-7);

/// Tail size from the largest log-gap of a descending spectrum, in [1, P-1].
std::size_t tail_from_spectral_gap(VectorView singular_values);

/// The first `keep` columns of U. Throws ConfigError unless 0 < keep <= P.
Matrix reparametrization_basis(const IdentifiabilityReport& report, std::size_t keep);

}  // namespace empgram
