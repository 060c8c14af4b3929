#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation; AVX2 (x86-64) and NEON (aarch64) variants are selected at
// runtime when the CPU supports them. Set WAYREF_SIMD=scalar to force the
// reference path.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace wayref::kernels {

struct Nearest {
  std::size_t index = std::numeric_limits<std::size_t>::max();
  double dist2 = std::numeric_limits<double>::infinity();
};

struct KernelTable {
  std::string_view name;

  // argmin of squared distance to (qx, qy); ties resolve to the lowest index.
  Nearest (*nearest)(std::span<const double> xs, std::span<const double> ys, double qx, double qy);

  // classes[i] = clamp(round_half_away(values[i] / resolution), lo, hi).
  // Returns how many values needed clamping.
  std::size_t (*quantize)(std::span<const double> values, double resolution, std::int64_t lo,
                          std::int64_t hi, std::span<std::int64_t> classes);

  // sum_i (ax[i]-bx[i])^2 + (ay[i]-by[i])^2
  double (*sum_squared_distance)(std::span<const double> ax, std::span<const double> ay,
                                 std::span<const double> bx, std::span<const double> by);

  // sqrt(var(east) + var(north)) with population variances.
  double (*ensemble_spread)(std::span<const double> east, std::span<const double> north);

  // out[i] = sum_k taps[k] * input[i + k] for i < input.size() - taps.size() + 1.
  // Accumulates taps in index order, so every variant is bitwise identical.
  void (*correlate)(std::span<const double> input, std::span<const double> taps,
                    std::span<double> out);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// The table used by the free functions below.
const KernelTable& active();

inline Nearest nearest(std::span<const double> xs, std::span<const double> ys, double qx, double qy) {
  return active().nearest(xs, ys, qx, qy);
}
inline std::size_t quantize(std::span<const double> values, double resolution, std::int64_t lo,
                            std::int64_t hi, std::span<std::int64_t> classes) {
  return active().quantize(values, resolution, lo, hi, classes);
}
inline double sum_squared_distance(std::span<const double> ax, std::span<const double> ay,
                                   std::span<const double> bx, std::span<const double> by) {
  return active().sum_squared_distance(ax, ay, bx, by);
}
inline double ensemble_spread(std::span<const double> east, std::span<const double> north) {
  return active().ensemble_spread(east, north);
}
inline void correlate(std::span<const double> input, std::span<const double> taps,
                      std::span<double> out) {
  active().correlate(input, taps, out);
}

}  // namespace wayref::kernels
