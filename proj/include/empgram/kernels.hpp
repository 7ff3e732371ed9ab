#pragma once

// Inner-loop arithmetic used by the integrator and the Gramian accumulators.
//
// Every kernel exists as a portable scalar reference and, where the target
// supports it, an AVX2/FMA variant. The variant is picked once at runtime from
// the CPU feature flags; EMPGRAM_KERNELS=scalar forces the reference path.
// Variants agree to rounding, not bit-for-bit: summation order differs.
// Within one process the choice is fixed, so results are reproducible.

#include <cstddef>

namespace empgram::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// sum_i w[i] * a[i] * b[i]
  double (*weighted_dot)(const double* a, const double* b, const double* w, std::size_t n);
  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// x[i] *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  /// max_i |x[i]|, 0 for n == 0
  double (*max_abs)(const double* x, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table() noexcept;

bool cpu_supports_avx2() noexcept;

/// Table selected for this process.
const KernelTable& active() noexcept;

}  // namespace empgram::kernels
