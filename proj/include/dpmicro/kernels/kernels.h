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

// Column kernels used by the mechanisms and metrics. Every kernel has a
// scalar reference implementation; an AVX2 variant is compiled on x86-64
// and selected at first use when the CPU supports it.
//
// Elementwise kernels (add_clamp, accumulate_scaled, bin_index) produce
// bit-identical results across variants. Reductions may differ in the last
// few ulps because the vector variants sum in four lanes.
//
// The DPMICRO_KERNELS environment variable (scalar|avx2|auto) overrides the
// automatic choice.

#ifndef DPMICRO_KERNELS_KERNELS_H_
#define DPMICRO_KERNELS_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace dpmicro::kernels {

struct KernelTable {
  std::string_view name;

  double (*sum)(const double* x, std::size_t n);
  // sum (x[i] - mean)^2
  double (*sum_squared_deviation)(const double* x, std::size_t n, double mean);
  // sum |a[i] - b[i]|
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
  // sum |a[i] - b[i]| / max(floor, |a[i]|)
  double (*relative_error_sum)(const double* original, const double* masked,
                               std::size_t n, double floor);
  // out[i] = min(max(x[i] + noise[i], lo), hi); out may alias x.
  void (*add_clamp)(const double* x, const double* noise, std::size_t n,
                    double lo, double hi, double* out);
  // acc[i] += (x[i] - offset) * scale
  void (*accumulate_scaled)(double* acc, const double* x, std::size_t n,
                            double offset, double scale);
  // out[i] = clamp(floor((x[i] - lo) * inv_width), 0, bins - 1)
  void (*bin_index)(const double* x, std::size_t n, double lo, double inv_width,
                    std::int32_t bins, std::int32_t* out);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table();
// The table picked for this process.
const KernelTable& active();

inline double sum(std::span<const double> x) {
  return active().sum(x.data(), x.size());
}

inline double mean(std::span<const double> x) {
  return x.empty() ? 0.0 : sum(x) / static_cast<double>(x.size());
}

// Population variance (divides by n).
inline double variance(std::span<const double> x) {
  if (x.empty()) return 0.0;
  const double m = mean(x);
  return active().sum_squared_deviation(x.data(), x.size(), m) /
         static_cast<double>(x.size());
}

inline double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
  return active().sum_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace dpmicro::kernels

#endif  // DPMICRO_KERNELS_KERNELS_H_
