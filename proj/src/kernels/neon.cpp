#include <arm_neon.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace wayref::kernels::neon {

Nearest nearest(std::span<const double> xs, std::span<const double> ys, double qx, double qy) {
  const std::size_t n = xs.size();
  const float64x2_t vqx = vdupq_n_f64(qx);
  const float64x2_t vqy = vdupq_n_f64(qy);
  float64x2_t best = vdupq_n_f64(INFINITY);
  float64x2_t best_idx = vdupq_n_f64(-1.0);
  const double start[2] = {0.0, 1.0};
  float64x2_t idx = vld1q_f64(start);
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vqx, vld1q_f64(xs.data() + i));
    const float64x2_t dy = vsubq_f64(vqy, vld1q_f64(ys.data() + i));
    const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
    const uint64x2_t lt = vcltq_f64(d2, best);
    best = vbslq_f64(lt, d2, best);
    best_idx = vbslq_f64(lt, idx, best_idx);
    idx = vaddq_f64(idx, two);
  }
  double lane_d2[2], lane_idx[2];
  vst1q_f64(lane_d2, best);
  vst1q_f64(lane_idx, best_idx);
  Nearest out;
  for (int l = 0; l < 2; ++l) {
    if (lane_idx[l] < 0.0) continue;
    const auto li = static_cast<std::size_t>(lane_idx[l]);
    if (lane_d2[l] < out.dist2 || (lane_d2[l] == out.dist2 && li < out.index)) {
      out.dist2 = lane_d2[l];
      out.index = li;
    }
  }
  for (; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    const double d2 = dx * dx + dy * dy;
    if (d2 < out.dist2) {
      out.dist2 = d2;
      out.index = i;
    }
  }
  return out;
}

std::size_t quantize(std::span<const double> values, double resolution, std::int64_t lo,
                     std::int64_t hi, std::span<std::int64_t> classes) {
  const std::size_t n = values.size();
  const double dlo = static_cast<double>(lo);
  const double dhi = static_cast<double>(hi);
  const float64x2_t vres = vdupq_n_f64(resolution);
  const float64x2_t vlo = vdupq_n_f64(dlo);
  const float64x2_t vhi = vdupq_n_f64(dhi);
  std::size_t saturated = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // vrndaq rounds to nearest with ties away from zero, like std::round
    float64x2_t t = vrndaq_f64(vdivq_f64(vld1q_f64(values.data() + i), vres));
    const uint64x2_t out_of_range = vorrq_u64(vcltq_f64(t, vlo), vcgtq_f64(t, vhi));
    saturated += (vgetq_lane_u64(out_of_range, 0) ? 1 : 0) + (vgetq_lane_u64(out_of_range, 1) ? 1 : 0);
    t = vminq_f64(vmaxq_f64(t, vlo), vhi);
    classes[i] = static_cast<std::int64_t>(vgetq_lane_f64(t, 0));
    classes[i + 1] = static_cast<std::int64_t>(vgetq_lane_f64(t, 1));
  }
  for (; i < n; ++i) {
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
  const std::size_t n = ax.size();
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(ax.data() + i), vld1q_f64(bx.data() + i));
    const float64x2_t dy = vsubq_f64(vld1q_f64(ay.data() + i), vld1q_f64(by.data() + i));
    acc = vaddq_f64(acc, vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    sum += dx * dx + dy * dy;
  }
  return sum;
}

double ensemble_spread(std::span<const double> east, std::span<const double> north) {
  const std::size_t n = east.size();
  if (n == 0) return 0.0;
  float64x2_t se = vdupq_n_f64(0.0), sn = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    se = vaddq_f64(se, vld1q_f64(east.data() + i));
    sn = vaddq_f64(sn, vld1q_f64(north.data() + i));
  }
  double sum_e = vaddvq_f64(se), sum_n = vaddvq_f64(sn);
  for (; i < n; ++i) {
    sum_e += east[i];
    sum_n += north[i];
  }
  const double me = sum_e / static_cast<double>(n);
  const double mn = sum_n / static_cast<double>(n);
  const float64x2_t vme = vdupq_n_f64(me), vmn = vdupq_n_f64(mn);
  float64x2_t ve = vdupq_n_f64(0.0), vn = vdupq_n_f64(0.0);
  i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t de = vsubq_f64(vld1q_f64(east.data() + i), vme);
    const float64x2_t dn = vsubq_f64(vld1q_f64(north.data() + i), vmn);
    ve = vaddq_f64(ve, vmulq_f64(de, de));
    vn = vaddq_f64(vn, vmulq_f64(dn, dn));
  }
  double var_e = vaddvq_f64(ve), var_n = vaddvq_f64(vn);
  for (; i < n; ++i) {
    const double de = east[i] - me;
    const double dn = north[i] - mn;
    var_e += de * de;
    var_n += dn * dn;
  }
  return std::sqrt(var_e / static_cast<double>(n) + var_n / static_cast<double>(n));
}

void correlate(std::span<const double> input, std::span<const double> taps, std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t m = taps.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < m; ++k)
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(taps[k]), vld1q_f64(input.data() + i + k)));
    vst1q_f64(out.data() + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += taps[k] * input[i + k];
    out[i] = acc;
  }
}

}  // namespace wayref::kernels::neon
