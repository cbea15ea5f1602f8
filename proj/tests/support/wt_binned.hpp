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

#include <algorithm>
#include <cstddef>

#include "cpm/detector.hpp"
#include "cpm/emodel.hpp"
#include "cpm/fock.hpp"
#include "cpm/quadrature.hpp"
#include "cpm/sdmodel.hpp"

namespace cpm::testing {

// Closed-form mean waiting time averaged over first-click times in
// [max(0, t - width/2), t + width/2], the same bin the Monte Carlo
// estimator pools.
inline double binned_mean_wt(const PhotonDistribution& dist,
                             const IdealizedDetector& det, double rt_first,
                             double theta, double width) {
  const double lo = std::max(0.0, rt_first - 0.5 * width);
  const double hi = rt_first + 0.5 * width;
  const auto& rule = quad::gauss_legendre(12);
  double norm = 0.0;
  double first = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[i];
    const auto win = integrate_window(
        [&](double tau) {
          return det.variant == Variant::kSD ? sd::wt_density(dist, det, t, tau)
                                             : e::wt_density(dist, det, t, tau);
        },
        theta);
    norm += rule.weights[i] * win.norm;
    first += rule.weights[i] * win.first;
  }
  return first / norm;
}

}  // namespace cpm::testing
