#include "empgram/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "empgram/error.hpp"

namespace empgram {
namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// One Jacobi rotation annihilating a(p, q); updates a and the accumulated v.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

SymmetricEigen sym_eigen(const Matrix& w) {
  if (!w.square()) throw DomainError("sym_eigen: matrix is not square");
  const double scale = max_abs(w);
  if (asymmetry(w) > 1e-8 * scale) throw DomainError("sym_eigen: matrix is not symmetric");

  const std::size_t n = w.rows();
  Matrix a = symmetrized(w);
  Matrix v = Matrix::identity(n);
  const double target = 1e-14 * frobenius_norm(a);

  constexpr int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (a(p, q) != 0.0) rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(a(i, i)) > std::abs(a(j, j)); });

  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values[c] = a(src, src);
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v(i, src)) > std::abs(v(pivot, src))) pivot = i;
    const double sign = v(pivot, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = sign * v(i, src);
  }
  return out;
}

Matrix pinv(const Matrix& w, double rtol) {
  const std::size_t n = w.rows();
  if (n == 0) return Matrix();
  const SymmetricEigen eig = sym_eigen(w);
  if (rtol < 0.0) rtol = static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  const double cutoff = rtol * std::abs(eig.values.front());

  Matrix out(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const double lambda = eig.values[c];
    if (!(std::abs(lambda) > cutoff) || lambda == 0.0) continue;
    const double inv = 1.0 / lambda;
    for (std::size_t i = 0; i < n; ++i) {
      const double ui = eig.vectors(i, c) * inv;
      if (ui == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += ui * eig.vectors(j, c);
    }
  }
  return symmetrized(out);
}

Matrix schur_complement(const Matrix& w_o, const Matrix& w_m, const Matrix& w_p, SchurMode mode) {
  if (!w_o.square() || !w_p.square()) throw DomainError("schur_complement: diagonal blocks must be square");
  if (w_m.rows() != w_p.rows() || w_m.cols() != w_o.rows())
    throw DomainError("schur_complement: mixed block must be " + std::to_string(w_p.rows()) + "x" +
                      std::to_string(w_o.rows()));
  if (mode == SchurMode::approximate) return w_p;
  Matrix correction = w_m * pinv(w_o) * w_m.transposed();
  return symmetrized(w_p - correction);
}

SchurMode parse_schur_mode(std::string_view name) {
  if (name == "approx" || name == "approximate") return SchurMode::approximate;
  if (name == "exact") return SchurMode::exact;
  throw ConfigError("unknown Schur mode '" + std::string(name) + "'");
}

std::string_view to_string(SchurMode mode) { return mode == SchurMode::exact ? "exact" : "approx"; }

}  // namespace empgram
