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

#include "cpm/fock.hpp"

// Diagonal superoperator algebra on Fock populations.
//
//   A-type shift    (A^k rho)_n   = (n+k)!/n! rho_{n+k}     (A rho = a rho a^+)
//   eps-type shift  (eps^k rho)_n = rho_{n+k}               (eps rho = E_- rho E_+)
//
// Both are nilpotent on a truncated vector, so every function of them is
// evaluated as a finite power series. Results are unnormalized.
namespace cpm::kernels {

PhotonDistribution apply_a_power(const PhotonDistribution& dist, int k);

// (x A)^k / k! rho, i.e. out[n] = C(n+k, k) x^k rho_{n+k}. Stays in double
// range where the raw A^k would overflow.
PhotonDistribution apply_a_power_scaled(const PhotonDistribution& dist, int k,
                                        double x);

PhotonDistribution apply_eps_power(const PhotonDistribution& dist, int k);

// sum_{l >= 0} v^l eps^{k0+l} rho  ==  eps^{k0} (1 - v eps)^{-1} rho.
PhotonDistribution eps_resolvent_series(const PhotonDistribution& dist,
                                        double v, int k0);

// exp(-rt (1 - v eps)) rho by uniformization.
PhotonDistribution e_semigroup(const PhotonDistribution& dist, double rt,
                               double v);

// Tr[eps^k rho] = sum_{n >= k} rho_n.
double eps_trace(const PhotonDistribution& dist, int k);

}  // namespace cpm::kernels
