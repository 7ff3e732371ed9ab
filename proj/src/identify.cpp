#include "empgram/identify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "empgram/error.hpp"
#include "empgram/linalg.hpp"

namespace empgram {

std::size_t tail_from_spectral_gap(VectorView sv) {
  const std::size_t p = sv.size();
  if (p < 2) throw ConfigError("spectral gap needs at least two singular values");
  const double top = std::abs(sv.front());
  const double floor = top > 0.0 ? top * std::numeric_limits<double>::epsilon() : std::numeric_limits<double>::min();
  std::size_t rank = 1;
  double best = -1.0;
  for (std::size_t k = 0; k + 1 < p; ++k) {
    const double gap = std::log(std::max(std::abs(sv[k]), floor)) - std::log(std::max(std::abs(sv[k + 1]), floor));
    if (gap > best) {
      best = gap;
      rank = k + 1;
    }
  }
  return p - rank;
}

IdentifiabilityReport analyze_identifiability(const Matrix& w_i, std::optional<std::size_t> tail_size,
                                              double threshold) {
  const std::size_t p = w_i.rows();
  if (!w_i.square() || p < 2) throw ConfigError("identifiability analysis needs a square Gramian with P >= 2");
  const SymmetricEigen eig = sym_eigen(w_i);

  IdentifiabilityReport r;
  r.singular_values.resize(p);
  for (std::size_t k = 0; k < p; ++k) r.singular_values[k] = std::abs(eig.values[k]);
  r.vectors = eig.vectors;
  r.threshold = threshold;
  r.tail_size = tail_size ? *tail_size : tail_from_spectral_gap(r.singular_values);
  if (r.tail_size == 0 || r.tail_size >= p)
    throw ConfigError("tail size must be in [1, " + std::to_string(p - 1) + "], got " + std::to_string(r.tail_size));

  r.u_bar.assign(p, 0.0);
  for (std::size_t c = p - r.tail_size; c < p; ++c)
    for (std::size_t i = 0; i < p; ++i) r.u_bar[i] += std::abs(eig.vectors(i, c));

  const double top = *std::max_element(r.u_bar.begin(), r.u_bar.end());
  r.relative.resize(p);
  for (std::size_t i = 0; i < p; ++i) r.relative[i] = top > 0.0 ? r.u_bar[i] / top : 0.0;

  r.ranking.resize(p);
  std::iota(r.ranking.begin(), r.ranking.end(), 0);
  std::stable_sort(r.ranking.begin(), r.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return r.u_bar[a] > r.u_bar[b]; });
  for (std::size_t i = 0; i < p; ++i)
    if (r.relative[i] < threshold) r.identifiable.push_back(i);
  return r;
}

Matrix reparametrization_basis(const IdentifiabilityReport& report, std::size_t keep) {
  const std::size_t p = report.vectors.cols();
  if (keep == 0 || keep > p) throw ConfigError("keep must be in [1, " + std::to_string(p) + "]");
  return report.vectors.block(0, 0, report.vectors.rows(), keep);
}

}  // namespace empgram
