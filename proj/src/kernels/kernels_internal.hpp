#pragma once

#include "wayref/kernels.hpp"

namespace wayref::kernels {

#define WAYREF_KERNEL_DECLS                                                                      \
  Nearest nearest(std::span<const double> xs, std::span<const double> ys, double qx, double qy); \
  std::size_t quantize(std::span<const double> values, double resolution, std::int64_t lo,      \
                       std::int64_t hi, std::span<std::int64_t> classes);                       \
  double sum_squared_distance(std::span<const double> ax, std::span<const double> ay,           \
                              std::span<const double> bx, std::span<const double> by);          \
  double ensemble_spread(std::span<const double> east, std::span<const double> north);          \
  void correlate(std::span<const double> input, std::span<const double> taps, std::span<double> out);

namespace scalar {
WAYREF_KERNEL_DECLS
}
namespace avx2 {
WAYREF_KERNEL_DECLS
}
namespace neon {
WAYREF_KERNEL_DECLS
}

#undef WAYREF_KERNEL_DECLS

}  // namespace wayref::kernels
