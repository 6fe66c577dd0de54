// Copyright 2026 The dpmicro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Built with -mavx2 (no FMA, so products and sums round exactly like the
// scalar reference). Only reached through the dispatcher after a CPU check.

#include <immintrin.h>

#include <cmath>

#include "dpmicro/kernels/kernels.h"

namespace dpmicro::kernels {

namespace {

inline double Max(double a, double b) { return a > b ? a : b; }
inline double Min(double a, double b) { return a < b ? a : b; }

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m256d Abs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double Sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = HorizontalSum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double SumSquaredDeviation(const double* x, std::size_t n, double mean) {
  const __m256d m = _mm256_set1_pd(mean);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = HorizontalSum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - mean;
    s += d * d;
  }
  return s;
}

double SumAbsDiff(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(
        acc, Abs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
  }
  double s = HorizontalSum(acc);
  for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double RelativeErrorSum(const double* original, const double* masked,
                        std::size_t n, double floor) {
  const __m256d f = _mm256_set1_pd(floor);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d o = _mm256_loadu_pd(original + i);
    const __m256d diff = Abs(_mm256_sub_pd(o, _mm256_loadu_pd(masked + i)));
    // max_pd(a, b) returns a when a > b, matching Max(floor, |o|).
    acc = _mm256_add_pd(acc, _mm256_div_pd(diff, _mm256_max_pd(f, Abs(o))));
  }
  double s = HorizontalSum(acc);
  for (; i < n; ++i) {
    s += std::fabs(original[i] - masked[i]) / Max(floor, std::fabs(original[i]));
  }
  return s;
}

void AddClamp(const double* x, const double* noise, std::size_t n, double lo,
              double hi, double* out) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(noise + i));
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_max_pd(v, vlo), vhi));
  }
  for (; i < n; ++i) out[i] = Min(Max(x[i] + noise[i], lo), hi);
}

void AccumulateScaled(double* acc, const double* x, std::size_t n,
                      double offset, double scale) {
  const __m256d off = _mm256_set1_pd(offset);
  const __m256d sc = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d term = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), off), sc);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), term));
  }
  for (; i < n; ++i) acc[i] += (x[i] - offset) * scale;
}

void BinIndex(const double* x, std::size_t n, double lo, double inv_width,
              std::int32_t bins, std::int32_t* out) {
  const double last = static_cast<double>(bins - 1);
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vinv = _mm256_set1_pd(inv_width);
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vlast = _mm256_set1_pd(last);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_floor_pd(_mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vlo), vinv));
    t = _mm256_min_pd(_mm256_max_pd(t, vzero), vlast);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm256_cvttpd_epi32(t));
  }
  for (; i < n; ++i) {
    const double t = std::floor((x[i] - lo) * inv_width);
    out[i] = static_cast<std::int32_t>(Min(Max(t, 0.0), last));
  }
}

}  // namespace

const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{
      .name = "avx2",
      .sum = Sum,
      .sum_squared_deviation = SumSquaredDeviation,
      .sum_abs_diff = SumAbsDiff,
      .relative_error_sum = RelativeErrorSum,
      .add_clamp = AddClamp,
      .accumulate_scaled = AccumulateScaled,
      .bin_index = BinIndex,
  };
  return table;
}

}  // namespace dpmicro::kernels
