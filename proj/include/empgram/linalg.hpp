#pragma once

#include <string_view>

#include "empgram/matrix.hpp"

namespace empgram {

/// W = U diag(values) U^T, eigenpairs ordered by |value| descending (ties by
/// original index). Each column of U has its largest-magnitude entry
/// nonnegative. For PSD input this is the SVD.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops below
/// 1e-14 ||W||_F. Throws DomainError when ||W - W^T||_max > 1e-8 ||W||_max.
SymmetricEigen sym_eigen(const Matrix& w);

/// Moore-Penrose pseudo-inverse of a symmetric matrix: eigenvalues with
/// |lambda| <= rtol * max|lambda| are dropped. rtol < 0 selects dim * eps.
Matrix pinv(const Matrix& w, double rtol = -1.0);

enum class SchurMode { approximate, exact };

/// Parameter block of an augmented Gramian partitioned as
///   [[W_O, W_M^T], [W_M, W_P]]
/// with W_O (N x N), W_M (P x N, the lower-left block) and W_P (P x P).
///   exact:       W_P - W_M pinv(W_O) W_M^T
///   approximate: W_P (zeroth-order Neumann truncation of the inner inverse)
/// Throws DomainError on non-conformal blocks.
Matrix schur_complement(const Matrix& w_o, const Matrix& w_m, const Matrix& w_p, SchurMode mode);

SchurMode parse_schur_mode(std::string_view name);
std::string_view to_string(SchurMode mode);

}  // namespace empgram
