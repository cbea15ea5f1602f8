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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "cpm/exp_integral.hpp"
#include "cpm/quadrature.hpp"

using namespace cpm;
using cplx = std::complex<double>;

namespace {

// Newton recursion in long double; accurate for well separated points.
std::complex<long double> naive_dd(const std::vector<cplx>& z) {
  std::vector<std::complex<long double>> f;
  for (const auto& x : z) {
    f.push_back(std::exp(std::complex<long double>(x.real(), x.imag())));
  }
  for (std::size_t level = 1; level < z.size(); ++level) {
    for (std::size_t i = 0; i + level < z.size(); ++i) {
      const std::complex<long double> a(z[i].real(), z[i].imag());
      const std::complex<long double> b(z[i + level].real(),
                                        z[i + level].imag());
      f[i] = (f[i + 1] - f[i]) / (b - a);
    }
  }
  return f[0];
}

double rel_err(cplx a, std::complex<long double> b) {
  const cplx bb(static_cast<double>(b.real()), static_cast<double>(b.imag()));
  return std::abs(a - bb) / std::abs(bb);
}

}  // namespace

TEST_SUITE("expint") {

TEST_CASE("matches Newton recursion for separated points") {
  const std::vector<std::vector<cplx>> cases = {
      {{0.0, 0.0}, {1.0, 0.5}},
      {{0.0, 0.0}, {-2.0, 3.0}, {1.5, -1.0}},
      {{0.0, 0.0}, {-3.0, 0.0}, {2.0, 4.0}, {-1.0, -5.0}},
      {{0.0, 0.0}, {-4.0, 1.0}, {3.0, 2.0}, {-2.0, -6.0}, {5.0, 0.0}},
  };
  for (const auto& z : cases) {
    CHECK(rel_err(expint::exp_divided_difference(z), naive_dd(z)) < 1e-12);
  }
}

TEST_CASE("coincident points give Taylor coefficients") {
  const cplx c(0.3, -1.2);
  for (std::size_t k = 1; k <= 7; ++k) {
    std::vector<cplx> z(k + 1, c);
    const cplx dd = expint::exp_divided_difference(z);
    const cplx expect = std::exp(c) / std::tgamma(static_cast<double>(k) + 1.0);
    CHECK(std::abs(dd - expect) / std::abs(expect) < 1e-14);
  }
}

TEST_CASE("continuous through near-coincidence") {
  // Split a pair apart by h: the value must vary smoothly with h.
  const cplx a(-1.0, 2.0);
  const cplx b(0.5, -0.3);
  double prev = 0.0;
  for (double h : {1e-12, 1e-9, 1e-6, 1e-3, 0.3}) {
    const std::vector<cplx> z = {a, a + h, b};
    const cplx dd = expint::exp_divided_difference(z);
    const std::vector<cplx> z0 = {a, a, b};
    const cplx d0 = expint::exp_divided_difference(z0);
    const double change = std::abs(dd - d0) / std::abs(d0);
    CHECK(change < 2.0 * h + 1e-13);
    CHECK(change >= prev * 0.5);
    prev = change;
  }
}

TEST_CASE("large purely imaginary spread") {
  const std::vector<cplx> z = {{0.0, 0.0}, {-1.0, 1e6}, {-1.0, -1e6}};
  CHECK(rel_err(expint::exp_divided_difference(z), naive_dd(z)) < 1e-9);
}

TEST_CASE("chain integral equals quadrature") {
  // f(u) = 0.3 e^{(i 2 - 0.1) u} + 0.7 e^{-i 3 u}
  const expint::Factor f{expint::ExpTerm{{0.3, 0.0}, {-0.1, 2.0}},
                         expint::ExpTerm{{0.7, 0.0}, {0.0, -3.0}}};
  const expint::Factor g{expint::ExpTerm{{0.0, 0.5}, {0.2, 1.0}},
                         expint::ExpTerm{{1.0, 0.0}, {0.0, 0.0}}};
  const double a = 0.4;
  const double t = 5.0;
  auto mod = [](const expint::Factor& h, double u) {
    return std::norm(h[0].coef * std::exp(h[0].rate * u) +
                     h[1].coef * std::exp(h[1].rate * u));
  };
  const auto edges = quad::uniform_edges(0.0, t, 40);

  const std::array<expint::Factor, 1> one{f};
  const double q1 = quad::integrate(
      [&](double u) { return std::exp(-a * u) * mod(f, u); }, edges, 20);
  CHECK(expint::chain_modulus_integral(one, a, t) ==
        doctest::Approx(q1).epsilon(1e-12));

  const std::array<expint::Factor, 2> two{f, expint::reflected(g)};
  const double q2 = quad::integrate(
      [&](double u1) {
        const auto inner = quad::uniform_edges(0.0, t - u1, 20);
        return std::exp(-a * u1) * mod(f, u1) *
               quad::integrate(
                   [&](double u2) {
                     return std::exp(-a * u2) * mod(g, -u2);
                   },
                   inner, 16);
      },
      edges, 16);
  CHECK(expint::chain_modulus_integral(two, a, t) ==
        doctest::Approx(q2).epsilon(1e-10));
}

}  // TEST_SUITE
