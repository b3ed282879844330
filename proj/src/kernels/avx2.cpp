// AVX2 variants of the gap-bound reductions. Compiled with per-function
// target attributes so nothing outside this file picks up AVX2 code.

#include "maxgap/kernels.hpp"

#if defined(MAXGAP_HAVE_AVX2)

#include <immintrin.h>

#include <limits>

#define MAXGAP_AVX2 __attribute__((target("avx2")))

namespace maxgap::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MAXGAP_AVX2 inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

MAXGAP_AVX2 inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

MAXGAP_AVX2 double min_where_key_above(const double* keys, const double* values, std::size_t n, double x) {
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d inf = _mm256_set1_pd(kInf);
  __m256d acc = inf;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d key = _mm256_loadu_pd(keys + k);
    const __m256d val = _mm256_loadu_pd(values + k);
    const __m256d take = _mm256_cmp_pd(key, vx, _CMP_GT_OQ);
    acc = _mm256_min_pd(acc, _mm256_blendv_pd(inf, val, take));
  }
  double best = hmin(acc);
  for (; k < n; ++k) {
    if (keys[k] > x && values[k] < best) best = values[k];
  }
  return best;
}

MAXGAP_AVX2 double max_where_key_below(const double* keys, const double* values, std::size_t n, double x) {
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d ninf = _mm256_set1_pd(-kInf);
  __m256d acc = ninf;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d key = _mm256_loadu_pd(keys + k);
    const __m256d val = _mm256_loadu_pd(values + k);
    const __m256d take = _mm256_cmp_pd(key, vx, _CMP_LT_OQ);
    acc = _mm256_max_pd(acc, _mm256_blendv_pd(ninf, val, take));
  }
  double best = hmax(acc);
  for (; k < n; ++k) {
    if (keys[k] < x && values[k] > best) best = values[k];
  }
  return best;
}

MAXGAP_AVX2 double right_gap_scan(const double* anchors, const double* nearest, std::size_t n, double lo, double hi,
                                  double fallback) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  const __m256d vfb = _mm256_set1_pd(fallback);
  const __m256d inf = _mm256_set1_pd(kInf);
  const __m256d ninf = _mm256_set1_pd(-kInf);
  __m256d acc = ninf;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_loadu_pd(anchors + j);
    const __m256d near = _mm256_loadu_pd(nearest + j);
    const __m256d in_range = _mm256_and_pd(_mm256_cmp_pd(a, vlo, _CMP_GE_OQ), _mm256_cmp_pd(a, vhi, _CMP_LE_OQ));
    const __m256d partner = _mm256_blendv_pd(near, vfb, _mm256_cmp_pd(near, inf, _CMP_EQ_OQ));
    acc = _mm256_max_pd(acc, _mm256_blendv_pd(ninf, _mm256_sub_pd(partner, a), in_range));
  }
  double best = hmax(acc);
  for (; j < n; ++j) {
    if (anchors[j] >= lo && anchors[j] <= hi) {
      const double partner = nearest[j] == kInf ? fallback : nearest[j];
      const double gap = partner - anchors[j];
      if (gap > best) best = gap;
    }
  }
  return best;
}

MAXGAP_AVX2 double left_gap_scan(const double* anchors, const double* nearest, std::size_t n, double lo, double hi,
                                 double fallback) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  const __m256d vfb = _mm256_set1_pd(fallback);
  const __m256d ninf = _mm256_set1_pd(-kInf);
  __m256d acc = ninf;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_loadu_pd(anchors + j);
    const __m256d near = _mm256_loadu_pd(nearest + j);
    const __m256d in_range = _mm256_and_pd(_mm256_cmp_pd(a, vlo, _CMP_GE_OQ), _mm256_cmp_pd(a, vhi, _CMP_LE_OQ));
    const __m256d partner = _mm256_blendv_pd(near, vfb, _mm256_cmp_pd(near, ninf, _CMP_EQ_OQ));
    acc = _mm256_max_pd(acc, _mm256_blendv_pd(ninf, _mm256_sub_pd(a, partner), in_range));
  }
  double best = hmax(acc);
  for (; j < n; ++j) {
    if (anchors[j] >= lo && anchors[j] <= hi) {
      const double partner = nearest[j] == -kInf ? fallback : nearest[j];
      const double gap = anchors[j] - partner;
      if (gap > best) best = gap;
    }
  }
  return best;
}

}  // namespace

namespace detail {
const KernelTable avx2_table{&min_where_key_above, &max_where_key_below, &right_gap_scan, &left_gap_scan};
}  // namespace detail

}  // namespace maxgap::kernels

#endif  // MAXGAP_HAVE_AVX2
