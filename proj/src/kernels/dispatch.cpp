#include <cstdlib>
#include <string_view>

#include "empgram/kernels.hpp"

namespace empgram::kernels {

#if defined(EMPGRAM_HAVE_AVX2)
const KernelTable* avx2_kernels_unchecked() noexcept;
#endif

bool cpu_supports_avx2() noexcept {
#if defined(EMPGRAM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* avx2_table() noexcept {
#if defined(EMPGRAM_HAVE_AVX2)
  if (cpu_supports_avx2()) return avx2_kernels_unchecked();
#endif
  return nullptr;
}

namespace {

const KernelTable& select() noexcept {
  if (const char* forced = std::getenv("EMPGRAM_KERNELS")) {
    if (std::string_view(forced) == "scalar") return scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace empgram::kernels
