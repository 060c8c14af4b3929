// Compiled with -mavx2. Only reached through the dispatch table after a CPU check.
#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace wayref::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

Nearest nearest(std::span<const double> xs, std::span<const double> ys, double qx, double qy) {
  const std::size_t n = xs.size();
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  __m256d best = _mm256_set1_pd(INFINITY);
  __m256d best_idx = _mm256_set1_pd(-1.0);
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(vqx, _mm256_loadu_pd(xs.data() + i));
    const __m256d dy = _mm256_sub_pd(vqy, _mm256_loadu_pd(ys.data() + i));
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d lt = _mm256_cmp_pd(d2, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d2, lt);
    best_idx = _mm256_blendv_pd(best_idx, idx, lt);
    idx = _mm256_add_pd(idx, four);
  }
  alignas(32) double lane_d2[4];
  alignas(32) double lane_idx[4];
  _mm256_store_pd(lane_d2, best);
  _mm256_store_pd(lane_idx, best_idx);
  Nearest out;
  for (int l = 0; l < 4; ++l) {
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
  const __m256d vres = _mm256_set1_pd(resolution);
  const __m256d vlo = _mm256_set1_pd(dlo);
  const __m256d vhi = _mm256_set1_pd(dhi);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t saturated = 0;
  std::size_t i = 0;
  alignas(32) double tmp[4];
  for (; i + 4 <= n; i += 4) {
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(values.data() + i), vres);
    // round half away from zero, matching std::round
    __m256d t = _mm256_round_pd(q, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
    const __m256d frac = _mm256_andnot_pd(sign, _mm256_sub_pd(q, t));
    const __m256d bump = _mm256_and_pd(_mm256_cmp_pd(frac, half, _CMP_GE_OQ),
                                       _mm256_or_pd(_mm256_and_pd(q, sign), one));
    t = _mm256_add_pd(t, bump);
    const __m256d out_of_range =
        _mm256_or_pd(_mm256_cmp_pd(t, vlo, _CMP_LT_OQ), _mm256_cmp_pd(t, vhi, _CMP_GT_OQ));
    saturated += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(out_of_range)));
    t = _mm256_min_pd(_mm256_max_pd(t, vlo), vhi);
    _mm256_store_pd(tmp, t);
    for (int l = 0; l < 4; ++l) classes[i + l] = static_cast<std::int64_t>(tmp[l]);
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
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(ax.data() + i), _mm256_loadu_pd(bx.data() + i));
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ay.data() + i), _mm256_loadu_pd(by.data() + i));
    acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  }
  double sum = hsum(acc);
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
  __m256d se = _mm256_setzero_pd(), sn = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    se = _mm256_add_pd(se, _mm256_loadu_pd(east.data() + i));
    sn = _mm256_add_pd(sn, _mm256_loadu_pd(north.data() + i));
  }
  double sum_e = hsum(se), sum_n = hsum(sn);
  for (; i < n; ++i) {
    sum_e += east[i];
    sum_n += north[i];
  }
  const double me = sum_e / static_cast<double>(n);
  const double mn = sum_n / static_cast<double>(n);
  const __m256d vme = _mm256_set1_pd(me), vmn = _mm256_set1_pd(mn);
  __m256d ve = _mm256_setzero_pd(), vn = _mm256_setzero_pd();
  i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d de = _mm256_sub_pd(_mm256_loadu_pd(east.data() + i), vme);
    const __m256d dn = _mm256_sub_pd(_mm256_loadu_pd(north.data() + i), vmn);
    ve = _mm256_add_pd(ve, _mm256_mul_pd(de, de));
    vn = _mm256_add_pd(vn, _mm256_mul_pd(dn, dn));
  }
  double var_e = hsum(ve), var_n = hsum(vn);
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
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < m; ++k)
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(taps[k]),
                                             _mm256_loadu_pd(input.data() + i + k)));
    _mm256_storeu_pd(out.data() + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += taps[k] * input[i + k];
    out[i] = acc;
  }
}

}  // namespace wayref::kernels::avx2
