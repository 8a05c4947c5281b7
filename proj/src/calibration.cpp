// Copyright 2026 The molmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>

#include "molmix/errors.hpp"
#include "molmix/specsim.hpp"

namespace molmix {
namespace {

// Bisection for a decreasing error curve f(gap) on [0, 60 sigma].
template <typename Fn>
double solve_gap(Fn&& error_at, double target, double sigma) {
  if (!(sigma > 0)) throw ValidationError("calibration needs sigma > 0");
  if (!(target > 0 && target < 0.5)) throw ValidationError("target error must be in (0, 0.5)");
  double lo = 0.0;
  double hi = 60.0 * sigma;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (error_at(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double two_class_overlap_error(double log_gap, double sigma) {
  if (sigma == 0.0) return log_gap > 0 ? 0.0 : 0.5;
  return normal_cdf(-log_gap / (2.0 * sigma));
}

double one_hot_block_error(double log_gap, double sigma, std::size_t block_size) {
  if (block_size < 2) throw ValidationError("one-hot blocks need S >= 2");
  if (sigma == 0.0) return log_gap > 0 ? 0.0 : 1.0 - 1.0 / static_cast<double>(block_size);
  // P(correct) = integral phi(z) Phi(z + gap/sigma)^(S-1) dz, composite Simpson.
  const double t = log_gap / sigma;
  const double others = static_cast<double>(block_size - 1);
  constexpr int kIntervals = 4800;
  constexpr double kLo = -12.0;
  constexpr double kHi = 12.0;
  const double h = (kHi - kLo) / kIntervals;
  double sum = 0.0;
  for (int k = 0; k <= kIntervals; ++k) {
    const double z = kLo + k * h;
    const double f = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi) * std::pow(normal_cdf(z + t), others);
    const double w = (k == 0 || k == kIntervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * f;
  }
  return 1.0 - sum * h / 3.0;
}

double one_hot_bit_error(double log_gap, double sigma, std::size_t block_size) {
  const double s = static_cast<double>(block_size);
  return one_hot_block_error(log_gap, sigma, block_size) * (s / 2.0) / (s - 1.0);
}

double calibrate_dense_gap(double target_bit_error, double sigma) {
  return solve_gap([&](double g) { return two_class_overlap_error(g, sigma); }, target_bit_error, sigma);
}

double calibrate_sparse_gap(double target_bit_error, double sigma, std::size_t block_size) {
  return solve_gap([&](double g) { return one_hot_bit_error(g, sigma, block_size); }, target_bit_error, sigma);
}

}  // namespace molmix
