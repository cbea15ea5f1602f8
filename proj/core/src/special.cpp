// Copyright 2026 The cpm Authors
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

#include "cpm/detail/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

namespace cpm::detail {

double log_factorial(std::size_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(std::size_t n, std::size_t k) {
  if (k == 0 || k == n) return 0.0;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_poisson_pmf(std::size_t k, double lambda) {
  if (lambda <= 0.0) {
    return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(k) * std::log(lambda) - lambda - log_factorial(k);
}

std::vector<double> poisson_pmf(double lambda, std::size_t k_max) {
  std::vector<double> out(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    out[k] = std::exp(log_poisson_pmf(k, lambda));
  }
  return out;
}

Window poisson_window(double lambda, double rel_cut) {
  if (lambda <= 0.0) return {0, 0};
  // Gaussian-tail bound around the mode plus a fixed margin for small
  // lambda where the law is skewed.
  const double width = std::sqrt(-2.0 * std::log(rel_cut)) *
                           std::sqrt(std::max(lambda, 1.0)) +
                       -std::log(rel_cut) / 2.0 + 10.0;
  const double lo = std::floor(lambda - width);
  const double hi = std::ceil(lambda + width);
  return {lo > 0.0 ? static_cast<std::size_t>(lo) : 0,
          static_cast<std::size_t>(hi)};
}

double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(a, x);
}

double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(a, x);
}

double falling_factorial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double out = 1.0;
  for (std::size_t i = 0; i < k; ++i) out *= static_cast<double>(n - i);
  return out;
}

}  // namespace cpm::detail
