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

#include <array>
#include <complex>
#include <span>

// Exact integrals of exponential polynomials over ordered time simplices.
//
// A "chain" is a product of factors f_i(u_i), each a two-term complex
// exponential sum, evaluated on consecutive durations u_1..u_k of an
// interval [0, T] with u_0 = T - sum u_i the idle remainder. The squared
// modulus of the chain times a common envelope exp(-A sum u_i) expands into
// 4^k exponentials of linear forms, and each of those integrates exactly
// via the Hermite-Genocchi identity
//
//   int_{u_0 + ... + u_k = T} exp(sum a_i u_i) = T^k exp[T a_0, ..., T a_k],
//
// the right-hand side being a divided difference of exp.
namespace cpm::expint {

using cplx = std::complex<double>;

struct ExpTerm {
  cplx coef;
  cplx rate;
};

// f(u) = terms[0].coef e^{terms[0].rate u} + terms[1].coef e^{terms[1].rate u}
using Factor = std::array<ExpTerm, 2>;

// Same function evaluated at -u.
Factor reflected(const Factor& f);

// Divided difference exp[z_0, ..., z_k] for k <= 7, stable for clustered
// and coincident points.
cplx exp_divided_difference(std::span<const cplx> z);

// int over {u_1..u_k >= 0, sum <= T} of exp(-A sum u_i) prod_i |f_i(u_i)|^2.
double chain_modulus_integral(std::span<const Factor> chain, double envelope,
                              double total);

}  // namespace cpm::expint
