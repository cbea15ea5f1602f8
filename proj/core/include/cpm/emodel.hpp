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

#include "cpm/detector.hpp"
#include "cpm/fock.hpp"

// E model: the click superoperator is built from the exponential phase
// operators, so the bright click rate is R for every n >= 1.
namespace cpm::e {

// Unnormalized no-count state e^{-d R t} [P_t rho + vacuum slot].
PhotonDistribution nocount(const PhotonDistribution& dist,
                           const IdealizedDetector& det, double rt);
double nocount_trace(const PhotonDistribution& dist,
                     const IdealizedDetector& det, double rt);

// m-count probability from the closed-form m-count superoperator, every
// epsilon function expanded as a power series and the time integral done
// through regularized incomplete gamma functions.
double count_prob(const PhotonDistribution& dist, const IdealizedDetector& det,
                  double rt, int m);
std::vector<double> count_distribution(const PhotonDistribution& dist,
                                       const IdealizedDetector& det, double rt,
                                       std::size_t m_max);

struct Kernels {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double omega = 0.0;    // NaN when the second factorial moment is zero
  double p0_surv = 0.0;  // Tr P_t^0 rho
};

// Evaluated from P_t^0 rho. Throws UndefinedStatistic for a zero-mean state.
Kernels kernels(const PhotonDistribution& dist, double rt);

// Factorial moments of the number of absorbed photons A = min(n, N_t),
// N_t ~ Poisson(R t), as sums of positive terms:
//   first  = nbar (1 - Xi_1)
//   second = n(n-1)bar (1 - Omega) - 2 nbar R t Xi_2
struct AbsorptionMoments {
  double first = 0.0;
  double second = 0.0;
};
AbsorptionMoments absorption_moments(const PhotonDistribution& dist,
                                     double rt);

CountStats moments(const PhotonDistribution& dist, const IdealizedDetector& det,
                   double rt);

double wt_density(const PhotonDistribution& dist, const IdealizedDetector& det,
                  double rt_first, double tau);

WaitingTimeCurve wt_curve(const PhotonDistribution& dist,
                          const IdealizedDetector& det, double rt_first,
                          std::vector<double> tau_grid, double theta);

double mean_wt(const PhotonDistribution& dist, const IdealizedDetector& det,
               double rt_first, double theta);

// nbar Xi_1.
double ncav(const PhotonDistribution& dist, double rt);

double counting_time(const PhotonDistribution& dist,
                     const IdealizedDetector& det, double fraction = 0.95);

}  // namespace cpm::e
