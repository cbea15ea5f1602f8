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

#include "cpm/exp_integral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cpm/error.hpp"

namespace cpm::expint {
namespace {

constexpr std::size_t kMaxPoints = 8;
// Points closer than this (all pairwise) are summed by Taylor series.
constexpr double kClusterRadius = 0.75;

cplx expm1(cplx z) {
  const double s = std::sin(0.5 * z.imag());
  return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * s * s,
          std::exp(z.real()) * std::sin(z.imag())};
}

// exp[z] for |z_i - c| small via sum_m h_m(y) / (m + k)!, where h_m is the
// complete homogeneous symmetric polynomial of y = z - c.
cplx taylor_dd(std::span<const cplx> z) {
  const std::size_t k = z.size() - 1;
  cplx centre = 0.0;
  for (const auto& zi : z) centre += zi;
  centre /= static_cast<double>(z.size());

  std::array<cplx, kMaxPoints> y{};
  for (std::size_t i = 0; i < z.size(); ++i) y[i] = z[i] - centre;

  // h[i] holds h_m(y_0..y_i) for the current degree m.
  std::array<cplx, kMaxPoints> h{};
  h.fill(1.0);
  double inv_fact = 1.0;
  for (std::size_t j = 1; j <= k; ++j) inv_fact /= static_cast<double>(j);

  double radius = 0.0;
  for (std::size_t i = 0; i <= k; ++i) radius = std::max(radius, std::abs(y[i]));

  // |h_m| / (m+k)! <= radius^m / (m! k!) bounds every remaining term.
  cplx sum = inv_fact;  // m = 0 term
  double bound = inv_fact;
  for (std::size_t m = 1; m < 80; ++m) {
    // h_m(y_0..y_i) = h_m(y_0..y_{i-1}) + y_i h_{m-1}(y_0..y_i)
    cplx prev = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
      const cplx without = i == 0 ? cplx(0.0) : prev;
      h[i] = without + y[i] * h[i];
      prev = h[i];
    }
    inv_fact /= static_cast<double>(m + k);
    const cplx term = h[k] * inv_fact;
    sum += term;
    bound *= radius / static_cast<double>(m);
    if (bound <= 1e-18 * std::abs(sum)) break;
  }
  return std::exp(centre) * sum;
}

cplx dd_recursive(std::span<const cplx> z) {
  const std::size_t count = z.size();
  if (count == 1) return std::exp(z[0]);
  if (count == 2) {
    const cplx d = z[1] - z[0];
    if (std::abs(d) < kClusterRadius) return taylor_dd(z);
    // (e^{z1} - e^{z0}) / d, anchored at the larger real part.
    if (z[1].real() >= z[0].real()) return -std::exp(z[1]) * expm1(-d) / d;
    return std::exp(z[0]) * expm1(d) / d;
  }

  std::size_t ia = 0;
  std::size_t ib = 1;
  double spread = -1.0;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const double s = std::abs(z[i] - z[j]);
      if (s > spread) {
        spread = s;
        ia = i;
        ib = j;
      }
    }
  }
  if (spread < kClusterRadius) return taylor_dd(z);

  std::array<cplx, kMaxPoints> without_a{};
  std::array<cplx, kMaxPoints> without_b{};
  std::size_t na = 0;
  std::size_t nb = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i != ia) without_a[na++] = z[i];
    if (i != ib) without_b[nb++] = z[i];
  }
  const cplx fa = dd_recursive({without_a.data(), na});
  const cplx fb = dd_recursive({without_b.data(), nb});
  return (fa - fb) / (z[ib] - z[ia]);
}

}  // namespace

Factor reflected(const Factor& f) {
  return {ExpTerm{f[0].coef, -f[0].rate}, ExpTerm{f[1].coef, -f[1].rate}};
}

cplx exp_divided_difference(std::span<const cplx> z) {
  if (z.empty() || z.size() > kMaxPoints) {
    throw InvalidArgument("divided difference needs 1..8 points");
  }
  return dd_recursive(z);
}

double chain_modulus_integral(std::span<const Factor> chain, double envelope,
                              double total) {
  const std::size_t k = chain.size();
  if (k == 0 || k + 1 > kMaxPoints) {
    throw InvalidArgument("chain length must be 1..7");
  }
  if (!(total > 0.0)) return 0.0;

  // Enumerate (i, j) term pairs of every factor: 4^k combinations.
  const std::size_t combos = std::size_t{1} << (2 * k);
  std::array<cplx, kMaxPoints> points{};
  cplx sum = 0.0;
  for (std::size_t mask = 0; mask < combos; ++mask) {
    cplx coef = 1.0;
    points[0] = 0.0;
    for (std::size_t f = 0; f < k; ++f) {
      const auto i = (mask >> (2 * f)) & 1u;
      const auto j = (mask >> (2 * f + 1)) & 1u;
      const ExpTerm& a = chain[f][i];
      const ExpTerm& b = chain[f][j];
      coef *= a.coef * std::conj(b.coef);
      points[f + 1] = total * (a.rate + std::conj(b.rate) - envelope);
    }
    if (coef == 0.0) continue;
    sum += coef * exp_divided_difference({points.data(), k + 1});
  }
  const double result = sum.real() * std::pow(total, static_cast<double>(k));
  if (!std::isfinite(result)) {
    throw NumericalError("exponential chain integral is not finite");
  }
  return result;
}

}  // namespace cpm::expint
