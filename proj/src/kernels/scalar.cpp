#include <cmath>

#include "kernels_internal.hpp"

namespace wayref::kernels::scalar {

Nearest nearest(std::span<const double> xs, std::span<const double> ys, double qx, double qy) {
  Nearest best;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.dist2) {
      best.dist2 = d2;
      best.index = i;
    }
  }
  return best;
}

std::size_t quantize(std::span<const double> values, double resolution, std::int64_t lo,
                     std::int64_t hi, std::span<std::int64_t> classes) {
  std::size_t saturated = 0;
  const double dlo = static_cast<double>(lo);
  const double dhi = static_cast<double>(hi);
  for (std::size_t i = 0; i < values.size(); ++i) {
    double c = std::round(values[i] / resolution);
    if (c < dlo) {
      c = dlo;
      ++saturated;
    } else if (c > dhi) {
      c = dhi;
      ++saturated;
    }
    classes[i] = static_cast<std::int64_t>(c);
  }
  return saturated;
}

double sum_squared_distance(std::span<const double> ax, std::span<const double> ay,
                            std::span<const double> bx, std::span<const double> by) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    sum += dx * dx + dy * dy;
  }
  return sum;
}

double ensemble_spread(std::span<const double> east, std::span<const double> north) {
  const std::size_t n = east.size();
  if (n == 0) return 0.0;
  double se = 0.0, sn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    se += east[i];
    sn += north[i];
  }
  const double me = se / static_cast<double>(n);
  const double mn = sn / static_cast<double>(n);
  double ve = 0.0, vn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double de = east[i] - me;
    const double dn = north[i] - mn;
    ve += de * de;
    vn += dn * dn;
  }
  return std::sqrt(ve / static_cast<double>(n) + vn / static_cast<double>(n));
}

void correlate(std::span<const double> input, std::span<const double> taps, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * input[i + k];
    out[i] = acc;
  }
}

}  // namespace wayref::kernels::scalar
