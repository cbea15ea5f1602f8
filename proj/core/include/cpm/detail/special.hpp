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

#pragma once

#include <cstddef>
#include <vector>

// Small special-function helpers shared by the counting models and the
// oracles. Everything is evaluated in log space where magnitudes can
// leave double range.
namespace cpm::detail {

double log_factorial(std::size_t n);

// log C(n, k), k <= n.
double log_binomial(std::size_t n, std::size_t k);

// log of lambda^k e^{-lambda} / k!; -inf when lambda == 0 and k > 0.
double log_poisson_pmf(std::size_t k, double lambda);

// Poisson(lambda) pmf for k = 0..k_max.
std::vector<double> poisson_pmf(double lambda, std::size_t k_max);

// Index window [lo, hi] outside of which the Poisson(lambda) weights are
// below `rel_cut` of the mode weight.
struct Window {
  std::size_t lo;
  std::size_t hi;
};
Window poisson_window(double lambda, double rel_cut = 1e-18);

// Regularized lower incomplete gamma P(a, x) = Pr[Poisson(x) >= a] for
// integer a >= 1.
double gamma_p(double a, double x);

double gamma_q(double a, double x);

// n!/(n-k)! as a double; zero when k > n.
double falling_factorial(std::size_t n, std::size_t k);

}  // namespace cpm::detail
