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

// SD model: the click superoperator is proportional to a rho a^dagger, so
// the bright click rate scales with the photon number.
namespace cpm::sd {

// Unnormalized no-count state S_t rho; its trace is the probability of no
// click in (0, t).
PhotonDistribution nocount(const PhotonDistribution& dist,
                           const IdealizedDetector& det, double rt);
double nocount_trace(const PhotonDistribution& dist,
                     const IdealizedDetector& det, double rt);

// Tr S_t (d R t + eta phi_t A)^m / m! rho, expanded term by term.
double count_prob(const PhotonDistribution& dist, const IdealizedDetector& det,
                  double rt, int m);

// p(0..m_max) in one pass: the registered-photon law (binomial thinning
// with probability eta phi_t) convolved with Poisson dark counts.
std::vector<double> count_distribution(const PhotonDistribution& dist,
                                       const IdealizedDetector& det, double rt,
                                       std::size_t m_max);

CountStats moments(const PhotonDistribution& dist, const IdealizedDetector& det,
                   double rt);

struct WtKernels {
  double phi0 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

WtKernels wt_kernels(const PhotonDistribution& dist,
                     const IdealizedDetector& det, double rt_first,
                     double tau);

// W_t(tau) in units of R^2.
double wt_density(const PhotonDistribution& dist, const IdealizedDetector& det,
                  double rt_first, double tau);

WaitingTimeCurve wt_curve(const PhotonDistribution& dist,
                          const IdealizedDetector& det, double rt_first,
                          std::vector<double> tau_grid, double theta);

double mean_wt(const PhotonDistribution& dist, const IdealizedDetector& det,
               double rt_first, double theta);

// Mean photon number left in the mode, nbar e^{-R t}.
double ncav(const PhotonDistribution& dist, double rt);

// R t at which the mean count reaches fraction * eta * nbar.
double counting_time(const PhotonDistribution& dist,
                     const IdealizedDetector& det, double fraction = 0.95);

}  // namespace cpm::sd
