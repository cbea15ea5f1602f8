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

#include <cmath>
#include <complex>
#include <cstddef>

#include "cpm/microdetector.hpp"
#include "cpm/quadrature.hpp"

// Pointwise Gauss-Legendre evaluation of the time-averaged bright and dark
// coefficients, for cross-checking the exact simplex integration. Only
// usable where |S_n|, |chi_n| stay representable over [0, T] (small
// upsilon).
namespace cpm::testing {

inline double chi_sq(const micro::DetectorParams& p, const micro::FieldMode& m,
                     int n, double u, bool reflected) {
  const auto e = micro::dressed_eval(p, m, n, u);
  const std::complex<double> i(0.0, 1.0);
  const auto value = reflected ? e.c_n + i * e.delta * e.s_n
                               : e.c_n - i * e.delta * e.s_n;
  return std::norm(value);
}

inline double bright_gl(const micro::DetectorParams& p,
                        const micro::FieldMode& m, int n, std::size_t panels,
                        std::size_t order) {
  const double t_total = p.averaging_time();
  const double a = p.gamma() * (2.0 * p.nbar_det + 1.0);
  const auto edges = quad::uniform_edges(0.0, t_total, panels);
  const double integral = quad::integrate(
      [&](double u) {
        return std::exp(-a * u) *
               std::norm(micro::dressed_eval(p, m, n, u).s_n);
      },
      edges, order);
  return 2.0 * p.gamma() * (1.0 + p.nbar_det) * integral / t_total;
}

inline double dark_gl(const micro::DetectorParams& p,
                      const micro::FieldMode& m, int n, std::size_t panels,
                      std::size_t order) {
  const double t_total = p.averaging_time();
  const double a = p.gamma() * (2.0 * p.nbar_det + 1.0);
  const auto outer = quad::uniform_edges(0.0, t_total, panels);
  const double integral = quad::integrate(
      [&](double u1) {
        const double rest = t_total - u1;
        if (rest <= 0.0) return 0.0;
        const auto inner = quad::uniform_edges(0.0, rest, panels);
        const double f1 = std::exp(-a * u1) * chi_sq(p, m, n + 1, u1, false);
        return f1 * quad::integrate(
                        [&](double u2) {
                          return std::exp(-a * u2) *
                                 chi_sq(p, m, n, u2, true);
                        },
                        inner, order);
      },
      outer, order);
  const double gamma = p.gamma();
  return 2.0 * gamma * (1.0 + p.nbar_det) * 2.0 * gamma * p.nbar_det *
         integral / t_total;
}

// Small-upsilon parameter set where pointwise evaluation is safe.
inline micro::DetectorParams reduced_params() {
  micro::DetectorParams p;
  p.b = 5.0;
  p.upsilon = 20.0;
  p.nbar_det = 1e-3;
  return p;
}

}  // namespace cpm::testing
