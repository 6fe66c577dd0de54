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

#include <cmath>

#include "dpmicro/kernels/kernels.h"

namespace dpmicro::kernels {

namespace {

// Comparisons are written as `a > b ? a : b` so that signed zeros resolve
// the same way as the vector max/min instructions.
inline double Max(double a, double b) { return a > b ? a : b; }
inline double Min(double a, double b) { return a < b ? a : b; }

double Sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double SumSquaredDeviation(const double* x, std::size_t n, double mean) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mean;
    s += d * d;
  }
  return s;
}

double SumAbsDiff(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double RelativeErrorSum(const double* original, const double* masked,
                        std::size_t n, double floor) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += std::fabs(original[i] - masked[i]) / Max(floor, std::fabs(original[i]));
  }
  return s;
}

void AddClamp(const double* x, const double* noise, std::size_t n, double lo,
              double hi, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = Min(Max(x[i] + noise[i], lo), hi);
}

void AccumulateScaled(double* acc, const double* x, std::size_t n,
                      double offset, double scale) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += (x[i] - offset) * scale;
}

void BinIndex(const double* x, std::size_t n, double lo, double inv_width,
              std::int32_t bins, std::int32_t* out) {
  const double last = static_cast<double>(bins - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::floor((x[i] - lo) * inv_width);
    out[i] = static_cast<std::int32_t>(Min(Max(t, 0.0), last));
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      .name = "scalar",
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
