// AVX2 variants. This translation unit is the only one built with -mavx2; the
// dispatcher calls into it only after the CPU reports support.
#include "kernels_impl.hpp"

#include <immintrin.h>

#include <cmath>

namespace fairprice::simd::detail {

namespace {

// [e0 o0 e1 o1] [e2 o2 e3 o3] -> even [e0 e1 e2 e3], odd [o0 o1 o2 o3]
inline void deinterleave(const double* src, __m256d& even, __m256d& odd) {
  const __m256d a = _mm256_loadu_pd(src);
  const __m256d b = _mm256_loadu_pd(src + 4);
  even = _mm256_permute4x64_pd(_mm256_unpacklo_pd(a, b), 0xD8);
  odd = _mm256_permute4x64_pd(_mm256_unpackhi_pd(a, b), 0xD8);
}

// [x0 x1 x2 x3] [y0 y1 y2 y3] -> dst = [x0 y0 x1 y1 x2 y2 x3 y3]
inline void interleave(__m256d x, __m256d y, double* dst) {
  const __m256d xs = _mm256_permute4x64_pd(x, 0xD8);
  const __m256d ys = _mm256_permute4x64_pd(y, 0xD8);
  _mm256_storeu_pd(dst, _mm256_unpacklo_pd(xs, ys));
  _mm256_storeu_pd(dst + 4, _mm256_unpackhi_pd(xs, ys));
}

void contract_avx2(const double* next, double* out, std::size_t n_out, double w_up, double w_down) {
  const __m256d wu = _mm256_set1_pd(w_up);
  const __m256d wd = _mm256_set1_pd(w_down);
  std::size_t i = 0;
  for (; i + 4 <= n_out; i += 4) {
    __m256d up, down;
    deinterleave(next + 2 * i, up, down);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(wu, up), _mm256_mul_pd(wd, down)));
  }
  for (; i < n_out; ++i) {
    out[i] = w_up * next[2 * i] + w_down * next[2 * i + 1];
  }
}

void expand_avx2(const double* parent, double* out, std::size_t n_parent, double w_up, double w_down) {
  const __m256d wu = _mm256_set1_pd(w_up);
  const __m256d wd = _mm256_set1_pd(w_down);
  std::size_t i = 0;
  for (; i + 4 <= n_parent; i += 4) {
    const __m256d p = _mm256_loadu_pd(parent + i);
    interleave(_mm256_mul_pd(p, wu), _mm256_mul_pd(p, wd), out + 2 * i);
  }
  for (; i < n_parent; ++i) {
    out[2 * i] = parent[i] * w_up;
    out[2 * i + 1] = parent[i] * w_down;
  }
}

void hedge_ratio_avx2(const double* value, const double* price, double* out, std::size_t n_out) {
  std::size_t i = 0;
  for (; i + 4 <= n_out; i += 4) {
    __m256d v_up, v_down, s_up, s_down;
    deinterleave(value + 2 * i, v_up, v_down);
    deinterleave(price + 2 * i, s_up, s_down);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_sub_pd(v_up, v_down), _mm256_sub_pd(s_up, s_down)));
  }
  for (; i < n_out; ++i) {
    out[i] = (value[2 * i] - value[2 * i + 1]) / (price[2 * i] - price[2 * i + 1]);
  }
}

void multiply_accumulate_avx2(double* acc, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), prod));
  }
  for (; i < n; ++i) {
    acc[i] += a[i] * b[i];
  }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < n; ++i) {
    lane[i & 3] += a[i] * b[i];
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, m);
  double best = lane[0];
  for (int k = 1; k < 4; ++k) {
    if (lane[k] > best) best = lane[k];
  }
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > best) best = d;
  }
  return best;
}

}  // namespace

const KernelTable kAvx2Table{
    Isa::avx2,
    "avx2",
    contract_avx2,
    expand_avx2,
    hedge_ratio_avx2,
    multiply_accumulate_avx2,
    dot_avx2,
    max_abs_diff_avx2,
};

}  // namespace fairprice::simd::detail
