#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace wayref::kernels {

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar",
                                 &scalar::nearest,
                                 &scalar::quantize,
                                 &scalar::sum_squared_distance,
                                 &scalar::ensemble_spread,
                                 &scalar::correlate};
  return table;
}

const KernelTable* avx2_table() {
#if defined(WAYREF_HAVE_AVX2)
  static const KernelTable table{"avx2",
                                 &avx2::nearest,
                                 &avx2::quantize,
                                 &avx2::sum_squared_distance,
                                 &avx2::ensemble_spread,
                                 &avx2::correlate};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(WAYREF_HAVE_NEON)
  static const KernelTable table{"neon",
                                 &neon::nearest,
                                 &neon::quantize,
                                 &neon::sum_squared_distance,
                                 &neon::ensemble_spread,
                                 &neon::correlate};
  return &table;  // Advanced SIMD is mandatory on aarch64
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("WAYREF_SIMD");
  const std::string_view want = env ? env : "";
  if (want == "scalar") return scalar_table();
  if (const KernelTable* t = avx2_table()) return *t;
  if (const KernelTable* t = neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace wayref::kernels
